#pragma once

#include <optional>
#include <vector>

#include "binabc/harness/experiment.hpp"
#include "binabc/harness/metrics.hpp"
#include "binabc/problems/binnn.hpp"

namespace binabc {

/// Test-set performance of the models accumulated over the tail of every
/// repeat of one grid cell: the pooled majority vote, the best single model
/// in the pool, and the per-repeat vote spread.
struct EnsembleReport {
    std::size_t model_count = 0;
    double pooled_vote_error = 0.0;
    double best_single_error = 0.0;
    MeanSe per_repeat_vote;
};

EnsembleReport ensemble_report(const BinnnProblem& problem, const PointResult& point);

/// Final-population posterior quality for problems with a tractable
/// likelihood: the unnormalized negative log posterior of every chain, and
/// (when the state space is small enough to enumerate) the exact optimum as
/// a reference.
struct PosteriorRepeatReport {
    int repeat = 0;
    std::vector<double> chain_neg_log_posterior;
    std::optional<double> exact_map_neg_log;
};

std::vector<PosteriorRepeatReport> posterior_report(const PointResult& point,
                                                    std::size_t max_enum_bits = 20);

}  // namespace binabc
