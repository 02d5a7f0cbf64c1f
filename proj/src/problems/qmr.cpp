#include "binabc/problems/qmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace binabc {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_prob_range(const std::vector<double>& v, const char* what) {
    for (const double p : v)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string("QmrModel: ") + what +
                                        " outside [0, 1]");
}

// ln(1 - exp(s)) for s <= 0, stable near both ends. s == 0 gives -inf.
double log1mexp(double s) {
    if (s < -kLn2)
        return std::log1p(-std::exp(s));
    return std::log(-std::expm1(s));
}

}  // namespace

QmrModel::QmrModel(std::size_t diseases, std::size_t findings, std::vector<double> leak,
                   std::vector<double> assoc, std::vector<double> prior_on)
    : diseases_(diseases),
      findings_(findings),
      leak_(std::move(leak)),
      assoc_(std::move(assoc)),
      prior_on_(std::move(prior_on)) {
    if (diseases_ == 0 || findings_ == 0)
        throw std::invalid_argument("QmrModel: needs at least one disease and finding");
    if (leak_.size() != findings_)
        throw std::invalid_argument("QmrModel: leak size mismatch");
    if (assoc_.size() != findings_ * diseases_)
        throw std::invalid_argument("QmrModel: association size mismatch");
    if (prior_on_.size() != diseases_)
        throw std::invalid_argument("QmrModel: prior size mismatch");
    check_prob_range(leak_, "leak probability");
    check_prob_range(assoc_, "association probability");
    for (const double p : prior_on_)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("QmrModel: prior probabilities must lie in (0, 1)");

    log1m_leak_.resize(findings_);
    for (std::size_t f = 0; f < findings_; ++f)
        log1m_leak_[f] = std::log1p(-leak_[f]);
    // Cause-major copy so the per-cause column is contiguous in the
    // likelihood inner loop.
    log1m_assoc_col_.resize(diseases_ * findings_);
    for (std::size_t f = 0; f < findings_; ++f)
        for (std::size_t l = 0; l < diseases_; ++l)
            log1m_assoc_col_[l * findings_ + f] = std::log1p(-assoc_[f * diseases_ + l]);
    log_prior_on_.resize(diseases_);
    log_prior_off_.resize(diseases_);
    for (std::size_t l = 0; l < diseases_; ++l) {
        log_prior_on_[l] = std::log(prior_on_[l]);
        log_prior_off_[l] = std::log1p(-prior_on_[l]);
    }
}

void QmrModel::log_off_probs(const BitVector& x, std::vector<double>& off) const {
    if (x.dim() != diseases_)
        throw std::invalid_argument("QmrModel: cause vector dimension mismatch");
    off = log1m_leak_;
    for (std::size_t l = 0; l < diseases_; ++l) {
        if (!x.bit(l))
            continue;
        const double* col = &log1m_assoc_col_[l * findings_];
        for (std::size_t f = 0; f < findings_; ++f)
            off[f] += col[f];
    }
}

double QmrModel::log_prior(const BitVector& x) const {
    if (x.dim() != diseases_)
        throw std::invalid_argument("QmrModel: cause vector dimension mismatch");
    double lp = 0.0;
    for (std::size_t l = 0; l < diseases_; ++l)
        lp += x.bit(l) ? log_prior_on_[l] : log_prior_off_[l];
    return lp;
}

BitVector QmrModel::sample_from_prior(RngStream& rng) const {
    BitVector x(diseases_);
    for (std::size_t l = 0; l < diseases_; ++l)
        if (rng.next_bernoulli(prior_on_[l]))
            x.set_bit(l, true);
    return x;
}

double qmr_log_likelihood(const QmrModel& model, const BitVector& x, const BitVector& y) {
    if (y.dim() != model.findings())
        throw std::invalid_argument("qmr_log_likelihood: finding vector dimension mismatch");
    std::vector<double> off;
    model.log_off_probs(x, off);
    double total = 0.0;
    for (std::size_t f = 0; f < model.findings(); ++f)
        total += y.bit(f) ? log1mexp(off[f]) : off[f];
    return total;
}

double qmr_log_likelihood(const QmrModel& model, const BitVector& x,
                          const std::vector<BitVector>& ys) {
    std::vector<double> off;
    model.log_off_probs(x, off);
    double total = 0.0;
    for (std::size_t f = 0; f < model.findings(); ++f) {
        std::size_t on = 0;
        for (const auto& y : ys) {
            if (y.dim() != model.findings())
                throw std::invalid_argument(
                    "qmr_log_likelihood: finding vector dimension mismatch");
            on += y.bit(f);
        }
        const std::size_t n_off = ys.size() - on;
        if (on > 0)
            total += static_cast<double>(on) * log1mexp(off[f]);
        total += static_cast<double>(n_off) * off[f];
    }
    return total;
}

double qmr_log_prior(const QmrModel& model, const BitVector& x) {
    return model.log_prior(x);
}

BitVector qmr_simulate(const QmrModel& model, const BitVector& x, RngStream& rng) {
    std::vector<double> off;
    model.log_off_probs(x, off);
    BitVector y(model.findings());
    for (std::size_t f = 0; f < model.findings(); ++f) {
        const double p_on = -std::expm1(off[f]);
        if (rng.next_bernoulli(p_on))
            y.set_bit(f, true);
    }
    return y;
}

double qmr_distance(const std::vector<BitVector>& simulated,
                    const std::vector<BitVector>& observed) {
    if (simulated.size() != observed.size() || simulated.empty())
        throw std::invalid_argument("qmr_distance: sets must be non-empty and equal size");
    std::size_t total = 0;
    for (std::size_t n = 0; n < simulated.size(); ++n)
        total += hamming(simulated[n], observed[n]);
    return static_cast<double>(total) / static_cast<double>(simulated.size());
}

std::map<BitVector, double> qmr_exact_posterior(const QmrModel& model,
                                                const std::vector<BitVector>& observed,
                                                std::size_t max_enum_bits) {
    const std::size_t L = model.diseases();
    if (L > max_enum_bits)
        throw std::invalid_argument("qmr_exact_posterior: dimension too large to enumerate");
    const std::size_t count = std::size_t{1} << L;

    std::vector<double> logs(count);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count; ++s) {
        BitVector x(L);
        for (std::size_t l = 0; l < L; ++l)
            if ((s >> l) & 1u)
                x.set_bit(l, true);
        logs[s] = model.log_prior(x) + qmr_log_likelihood(model, x, observed);
        best = std::max(best, logs[s]);
    }
    if (!std::isfinite(best))
        throw std::domain_error("qmr_exact_posterior: no state has positive probability");

    double norm = 0.0;
    for (const double lg : logs)
        norm += std::exp(lg - best);

    std::map<BitVector, double> post;
    for (std::size_t s = 0; s < count; ++s) {
        BitVector x(L);
        for (std::size_t l = 0; l < L; ++l)
            if ((s >> l) & 1u)
                x.set_bit(l, true);
        post.emplace(std::move(x), std::exp(logs[s] - best) / norm);
    }
    return post;
}

QmrInstance qmr_sample_instance(std::size_t diseases, std::size_t findings, double beta_a,
                                double beta_b, std::size_t n_obs, double prior_on,
                                RngStream& rng) {
    if (n_obs == 0)
        throw std::invalid_argument("qmr_sample_instance: needs at least one observation");
    std::vector<double> leak(findings);
    for (auto& q : leak)
        q = beta_sample(beta_a, beta_b, rng);
    std::vector<double> assoc(findings * diseases);
    for (auto& q : assoc)
        q = beta_sample(beta_a, beta_b, rng);
    std::vector<double> prior(diseases, prior_on);

    QmrInstance inst;
    inst.model = std::make_shared<QmrModel>(diseases, findings, std::move(leak),
                                            std::move(assoc), std::move(prior));
    inst.x_true = inst.model->sample_from_prior(rng);
    inst.observed.reserve(n_obs);
    for (std::size_t n = 0; n < n_obs; ++n)
        inst.observed.push_back(qmr_simulate(*inst.model, inst.x_true, rng));
    return inst;
}

QmrProblem::QmrProblem(QmrInstance instance) : instance_(std::move(instance)) {
    if (!instance_.model)
        throw std::invalid_argument("QmrProblem: missing model");
    if (instance_.observed.empty())
        throw std::invalid_argument("QmrProblem: missing observations");
    on_counts_.assign(instance_.model->findings(), 0);
    for (const auto& y : instance_.observed) {
        if (y.dim() != instance_.model->findings())
            throw std::invalid_argument("QmrProblem: observation dimension mismatch");
        for (std::size_t f = 0; f < y.dim(); ++f)
            on_counts_[f] += y.bit(f);
    }
}

BitVector QmrProblem::sample_prior(RngStream& rng) const {
    return instance_.model->sample_from_prior(rng);
}

double QmrProblem::chain_error(const BitVector& x) const {
    return static_cast<double>(hamming(x, instance_.x_true));
}

double QmrProblem::log_prior(const BitVector& x) const {
    return instance_.model->log_prior(x);
}

double QmrProblem::log_likelihood(const BitVector& x) const {
    const QmrModel& m = *instance_.model;
    std::vector<double> off;
    m.log_off_probs(x, off);
    const double n = static_cast<double>(instance_.observed.size());
    double total = 0.0;
    for (std::size_t f = 0; f < m.findings(); ++f) {
        const double on = static_cast<double>(on_counts_[f]);
        if (on_counts_[f] > 0)
            total += on * log1mexp(off[f]);
        total += (n - on) * off[f];
    }
    return total;
}

double QmrProblem::simulate_distance(const BitVector& x, RngStream& rng) const {
    // One simulated observation set, same draws as repeated qmr_simulate
    // calls, with the firing probabilities computed once and the paired
    // Hamming sum accumulated in place.
    const QmrModel& m = *instance_.model;
    std::vector<double> off;
    m.log_off_probs(x, off);
    std::vector<double> p_on(m.findings());
    for (std::size_t f = 0; f < m.findings(); ++f)
        p_on[f] = -std::expm1(off[f]);

    std::size_t total = 0;
    for (const auto& y : instance_.observed)
        for (std::size_t f = 0; f < m.findings(); ++f)
            total += rng.next_bernoulli(p_on[f]) != y.bit(f);
    return static_cast<double>(total) / static_cast<double>(instance_.observed.size());
}

}  // namespace binabc
