#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

#include "binabc/bitvector.hpp"
#include "binabc/population.hpp"
#include "binabc/problems/problem.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// Bipartite noisy-OR network: hidden binary causes ("diseases") explain
/// binary observations ("findings"). Finding f fails to fire with
/// probability (1 - leak[f]) * prod over active causes l of (1 - assoc[f][l]).
///
/// Log quantities of (1 - probability) are cached at construction; the raw
/// probabilities stay available for serialization and inspection.
class QmrModel {
public:
    QmrModel(std::size_t diseases, std::size_t findings, std::vector<double> leak,
             std::vector<double> assoc, std::vector<double> prior_on);

    std::size_t diseases() const { return diseases_; }
    std::size_t findings() const { return findings_; }

    double leak(std::size_t f) const { return leak_[f]; }
    double assoc(std::size_t f, std::size_t l) const { return assoc_[f * diseases_ + l]; }
    double prior_on(std::size_t l) const { return prior_on_[l]; }

    /// ln P(finding f stays off | x) accumulated over the active causes of
    /// x, written into `off` (size findings()).
    void log_off_probs(const BitVector& x, std::vector<double>& off) const;

    double log_prior(const BitVector& x) const;
    BitVector sample_from_prior(RngStream& rng) const;

private:
    std::size_t diseases_;
    std::size_t findings_;
    std::vector<double> leak_;      // [findings]
    std::vector<double> assoc_;     // [findings * diseases], finding-major
    std::vector<double> prior_on_;  // [diseases]

    std::vector<double> log1m_leak_;        // [findings]
    std::vector<double> log1m_assoc_col_;   // [diseases * findings], cause-major
    std::vector<double> log_prior_on_;      // [diseases]
    std::vector<double> log_prior_off_;     // [diseases]
};

/// ln P(y | x) for a single finding vector.
double qmr_log_likelihood(const QmrModel& model, const BitVector& x, const BitVector& y);

/// ln P(y_1..y_n | x) for an iid set of finding vectors.
double qmr_log_likelihood(const QmrModel& model, const BitVector& x,
                          const std::vector<BitVector>& ys);

double qmr_log_prior(const QmrModel& model, const BitVector& x);

/// One synthetic observation: each finding fires independently with its
/// noisy-OR probability given x, drawn in finding order.
BitVector qmr_simulate(const QmrModel& model, const BitVector& x, RngStream& rng);

/// Mean index-paired Hamming distance between two equally sized sets of
/// finding vectors.
double qmr_distance(const std::vector<BitVector>& simulated,
                    const std::vector<BitVector>& observed);

/// Exact posterior over all 2^diseases cause vectors, normalized. Refuses
/// dimensions above `max_enum_bits`.
std::map<BitVector, double> qmr_exact_posterior(const QmrModel& model,
                                                const std::vector<BitVector>& observed,
                                                std::size_t max_enum_bits = 20);

struct QmrInstance {
    std::shared_ptr<const QmrModel> model;
    BitVector x_true;
    std::vector<BitVector> observed;
};

/// Fresh random instance: leak and association probabilities iid
/// Beta(beta_a, beta_b), causes iid Bernoulli(prior_on), observations
/// simulated from the true cause vector.
QmrInstance qmr_sample_instance(std::size_t diseases, std::size_t findings, double beta_a,
                                double beta_b, std::size_t n_obs, double prior_on,
                                RngStream& rng);

/// Harness adapter. The ABC distance simulates as many observation sets as
/// were observed and compares them index-paired; the exact likelihood over
/// the observed set is also exposed, so the same instance serves both
/// likelihood and likelihood-free runs. The report metric is the Hamming
/// distance to the generating cause vector.
class QmrProblem final : public Problem, public LikelihoodTarget {
public:
    explicit QmrProblem(QmrInstance instance);

    std::size_t dim() const override { return instance_.model->diseases(); }
    BitVector sample_prior(RngStream& rng) const override;
    double chain_error(const BitVector& x) const override;

    double log_prior(const BitVector& x) const override;
    double log_likelihood(const BitVector& x) const override;
    double simulate_distance(const BitVector& x, RngStream& rng) const override;

    const LikelihoodTarget* likelihood_target() const override { return this; }

    const QmrInstance& instance() const { return instance_; }

private:
    QmrInstance instance_;
    std::vector<std::size_t> on_counts_;  // per finding, over the observed set
};

}  // namespace binabc
