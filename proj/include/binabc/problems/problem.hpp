#pragma once

#include <cstddef>

#include "binabc/bitvector.hpp"
#include "binabc/rng.hpp"
#include "binabc/sampler.hpp"

namespace binabc {

/// Benchmark contract consumed by the experiment harness: a prior to
/// initialize chains from, a simulator-plus-distance for likelihood-free
/// runs, an optional exact likelihood target, and a scalar per-chain error
/// used in reports.
class Problem : public AbcTarget {
public:
    virtual std::size_t dim() const = 0;
    virtual BitVector sample_prior(RngStream& rng) const = 0;

    /// Deterministic report metric for one chain state (not necessarily the
    /// ABC distance).
    virtual double chain_error(const BitVector& x) const = 0;

    /// Exact target when tractable; nullptr otherwise.
    virtual const LikelihoodTarget* likelihood_target() const { return nullptr; }
};

/// log prior of the low-complexity Boltzmann form exp(-popcount(x)/dim),
/// up to its normalizing constant.
double boltzmann_log_prior(const BitVector& x);

/// iid prior matching boltzmann_log_prior: each bit on with probability
/// 1 / (1 + exp(1/dim)).
BitVector boltzmann_sample_prior(std::size_t dim, RngStream& rng);

}  // namespace binabc
