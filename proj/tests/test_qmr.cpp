#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "binabc/bitvector.hpp"
#include "binabc/problems/qmr.hpp"
#include "binabc/rng.hpp"

using namespace binabc;

namespace {

// Direct probability-space evaluation: P(y|x) as a product over findings of
// the fire/stay-off probabilities, multiplied out with no log tricks.
double naive_likelihood(const QmrModel& m, const BitVector& x, const BitVector& y) {
    double prob = 1.0;
    for (std::size_t f = 0; f < m.findings(); ++f) {
        double off = 1.0 - m.leak(f);
        for (std::size_t l = 0; l < m.diseases(); ++l)
            if (x.bit(l))
                off *= 1.0 - m.assoc(f, l);
        prob *= y.bit(f) ? 1.0 - off : off;
    }
    return prob;
}

double naive_prior(const QmrModel& m, const BitVector& x) {
    double prob = 1.0;
    for (std::size_t l = 0; l < m.diseases(); ++l)
        prob *= x.bit(l) ? m.prior_on(l) : 1.0 - m.prior_on(l);
    return prob;
}

QmrModel tiny_model() {
    // Two causes, two findings, hand-picked probabilities.
    return QmrModel(2, 2,
                    /*leak=*/{0.1, 0.2},
                    /*assoc=*/{0.3, 0.5, 0.0, 0.4},
                    /*prior_on=*/{0.5, 0.5});
}

BitVector bits(std::size_t dim, std::size_t value) {
    BitVector x = BitVector::zeros(dim);
    for (std::size_t j = 0; j < dim; ++j)
        if (value & (std::size_t{1} << j))
            x.set_bit(j, true);
    return x;
}

QmrModel random_model(std::size_t diseases, std::size_t findings, RngStream& rng) {
    std::vector<double> leak(findings), assoc(findings * diseases), prior(diseases);
    for (double& v : leak)
        v = 0.05 + 0.9 * rng.next_double();
    for (double& v : assoc)
        v = 0.05 + 0.9 * rng.next_double();
    for (double& v : prior)
        v = 0.1 + 0.8 * rng.next_double();
    return QmrModel(diseases, findings, std::move(leak), std::move(assoc), std::move(prior));
}

}  // namespace

TEST_CASE("model constructor rejects malformed probabilities") {
    CHECK_THROWS_AS(QmrModel(2, 2, {0.1, 1.5}, {0.3, 0.5, 0.0, 0.4}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QmrModel(2, 2, {0.1, 0.2}, {0.3, -0.1, 0.0, 0.4}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QmrModel(2, 2, {0.1, 0.2}, {0.3, 0.5, 0.0, 0.4}, {0.5, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QmrModel(2, 2, {0.1}, {0.3, 0.5, 0.0, 0.4}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QmrModel(0, 2, {0.1, 0.2}, {}, {}), std::invalid_argument);
}

TEST_CASE("log likelihood matches the naive product over all tiny states") {
    const QmrModel m = tiny_model();
    for (std::size_t xv = 0; xv < 4; ++xv) {
        const BitVector x = bits(2, xv);
        for (std::size_t yv = 0; yv < 4; ++yv) {
            const BitVector y = bits(2, yv);
            const double expect = std::log(naive_likelihood(m, x, y));
            CHECK(qmr_log_likelihood(m, x, y) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("finding probabilities normalize over all outcomes") {
    RngStream rng(60);
    const QmrModel m = random_model(3, 6, rng);
    for (std::size_t xv = 0; xv < 8; ++xv) {
        const BitVector x = bits(3, xv);
        double total = 0.0;
        for (std::size_t yv = 0; yv < 64; ++yv)
            total += std::exp(qmr_log_likelihood(m, x, bits(6, yv)));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("a set of observations scores as the sum of singles") {
    RngStream rng(61);
    const QmrModel m = random_model(4, 5, rng);
    const BitVector x = bits(4, 0b1010);
    std::vector<BitVector> ys;
    double expect = 0.0;
    for (std::size_t v : {0b00111, 0b10001, 0b00000, 0b11111}) {
        ys.push_back(bits(5, v));
        expect += qmr_log_likelihood(m, x, ys.back());
    }
    CHECK(qmr_log_likelihood(m, x, ys) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cause prior matches the naive product and normalizes") {
    RngStream rng(62);
    const QmrModel m = random_model(3, 2, rng);
    double total = 0.0;
    for (std::size_t xv = 0; xv < 8; ++xv) {
        const BitVector x = bits(3, xv);
        const double lp = qmr_log_prior(m, x);
        CHECK(lp == doctest::Approx(std::log(naive_prior(m, x))).epsilon(1e-10));
        CHECK(m.log_prior(x) == lp);
        total += std::exp(lp);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("simulated findings fire at their noisy-OR rates") {
    const QmrModel m = tiny_model();
    const BitVector x = bits(2, 0b01);  // cause 0 active
    // P(f0) = 1-(1-0.1)(1-0.3) = 0.37; P(f1) = 1-(1-0.2)(1-0.0) = 0.2
    RngStream rng(63);
    const int n = 20000;
    int fire0 = 0, fire1 = 0;
    for (int t = 0; t < n; ++t) {
        const BitVector y = qmr_simulate(m, x, rng);
        fire0 += y.bit(0);
        fire1 += y.bit(1);
    }
    const double sd0 = std::sqrt(0.37 * 0.63 / n);
    const double sd1 = std::sqrt(0.2 * 0.8 / n);
    CHECK(std::abs(fire0 / static_cast<double>(n) - 0.37) < 4.5 * sd0);
    CHECK(std::abs(fire1 / static_cast<double>(n) - 0.2) < 4.5 * sd1);
}

TEST_CASE("distance averages index-paired Hamming gaps") {
    const std::vector<BitVector> sim = {BitVector::from_string("11"),
                                        BitVector::from_string("00")};
    const std::vector<BitVector> obs = {BitVector::from_string("10"),
                                        BitVector::from_string("01")};
    CHECK(qmr_distance(sim, obs) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qmr_distance(sim, sim) == 0.0);
    CHECK_THROWS_AS(qmr_distance(sim, {BitVector::from_string("10")}),
                    std::invalid_argument);
    CHECK_THROWS_AS(qmr_distance({}, {}), std::invalid_argument);
}

TEST_CASE("instance sampling is reproducible and well shaped") {
    RngStream a(64), b(64), c(65);
    const QmrInstance ia = qmr_sample_instance(5, 7, 0.15, 0.15, 3, 0.5, a);
    const QmrInstance ib = qmr_sample_instance(5, 7, 0.15, 0.15, 3, 0.5, b);
    const QmrInstance ic = qmr_sample_instance(5, 7, 0.15, 0.15, 3, 0.5, c);

    CHECK(ia.model->diseases() == 5);
    CHECK(ia.model->findings() == 7);
    CHECK(ia.x_true.dim() == 5);
    REQUIRE(ia.observed.size() == 3);
    for (const auto& y : ia.observed)
        CHECK(y.dim() == 7);

    CHECK(ia.x_true == ib.x_true);
    CHECK(ia.observed == ib.observed);
    for (std::size_t f = 0; f < 7; ++f) {
        CHECK(ia.model->leak(f) == ib.model->leak(f));
        for (std::size_t l = 0; l < 5; ++l)
            CHECK(ia.model->assoc(f, l) == ib.model->assoc(f, l));
    }
    bool differs = ia.x_true != ic.x_true || ia.observed != ic.observed ||
                   ia.model->leak(0) != ic.model->leak(0);
    CHECK(differs);
}

TEST_CASE("exact posterior reduces to the prior when data are uninformative") {
    // All associations zero: P(y|x) does not depend on x, so conditioning
    // cannot move the prior.
    const QmrModel m(3, 2, {0.3, 0.6}, std::vector<double>(6, 0.0), {0.2, 0.5, 0.7});
    const std::vector<BitVector> obs = {bits(2, 0b01), bits(2, 0b10)};
    const auto post = qmr_exact_posterior(m, obs);
    REQUIRE(post.size() == 8);
    double total = 0.0;
    for (const auto& [x, prob] : post) {
        CHECK(prob == doctest::Approx(std::exp(qmr_log_prior(m, x))).epsilon(1e-10));
        total += prob;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exact posterior agrees with a direct scan") {
    RngStream rng(66);
    const QmrInstance inst = qmr_sample_instance(6, 8, 0.5, 0.5, 4, 0.5, rng);
    const auto post = qmr_exact_posterior(*inst.model, inst.observed);
    REQUIRE(post.size() == 64);

    double total = 0.0;
    const BitVector* best = nullptr;
    double best_prob = -1.0;
    for (const auto& [x, prob] : post) {
        total += prob;
        if (prob > best_prob) {
            best_prob = prob;
            best = &x;
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // Same argmax as scanning the unnormalized score directly.
    BitVector scan_best = BitVector::zeros(6);
    double scan_score = -std::numeric_limits<double>::infinity();
    for (std::size_t xv = 0; xv < 64; ++xv) {
        const BitVector x = bits(6, xv);
        const double s =
            qmr_log_prior(*inst.model, x) + qmr_log_likelihood(*inst.model, x, inst.observed);
        if (s > scan_score) {
            scan_score = s;
            scan_best = x;
        }
    }
    REQUIRE(best != nullptr);
    CHECK(*best == scan_best);

    CHECK_THROWS_AS(qmr_exact_posterior(*inst.model, inst.observed, 5),
                    std::invalid_argument);
}

TEST_CASE("problem adapter simulates exactly like the free functions") {
    RngStream rng(67);
    QmrInstance inst = qmr_sample_instance(6, 9, 0.15, 0.15, 5, 0.5, rng);
    const QmrProblem problem(inst);
    CHECK(problem.dim() == 6);

    const BitVector x = bits(6, 0b010110);
    RngStream fused(68), manual(68);
    const double got = problem.simulate_distance(x, fused);
    std::vector<BitVector> sim;
    for (std::size_t k = 0; k < inst.observed.size(); ++k)
        sim.push_back(qmr_simulate(*inst.model, x, manual));
    const double expect = qmr_distance(sim, inst.observed);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(fused.next_u64() == manual.next_u64());
}

TEST_CASE("problem adapter likelihood matches the generic evaluation") {
    RngStream rng(69);
    QmrInstance inst = qmr_sample_instance(5, 8, 0.3, 0.3, 6, 0.4, rng);
    const QmrProblem problem(inst);
    for (std::size_t xv = 0; xv < 32; ++xv) {
        const BitVector x = bits(5, xv);
        CHECK(problem.log_likelihood(x) ==
              doctest::Approx(qmr_log_likelihood(*inst.model, x, inst.observed))
                  .epsilon(1e-10));
        CHECK(problem.log_prior(x) ==
              doctest::Approx(qmr_log_prior(*inst.model, x)).epsilon(1e-12));
    }
    CHECK(problem.likelihood_target() == &problem);
    CHECK(problem.chain_error(inst.x_true) == 0.0);
    const BitVector flipped = inst.x_true ^ bits(5, 0b00101);
    CHECK(problem.chain_error(flipped) == 2.0);
}

TEST_CASE("prior samples activate causes at their prior rates") {
    RngStream rng(70);
    const QmrModel m(3, 2, {0.1, 0.1}, std::vector<double>(6, 0.1), {0.2, 0.5, 0.8});
    const int n = 20000;
    std::vector<int> on(3, 0);
    for (int t = 0; t < n; ++t) {
        const BitVector x = m.sample_from_prior(rng);
        for (std::size_t l = 0; l < 3; ++l)
            on[l] += x.bit(l);
    }
    const double rates[] = {0.2, 0.5, 0.8};
    for (std::size_t l = 0; l < 3; ++l) {
        const double sd = std::sqrt(rates[l] * (1.0 - rates[l]) / n);
        CHECK(std::abs(on[l] / static_cast<double>(n) - rates[l]) < 4.5 * sd);
    }
}
