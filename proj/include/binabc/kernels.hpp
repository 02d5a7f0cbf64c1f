#pragma once

#include <cstddef>
#include <string_view>

#include "binabc/bitvector.hpp"
#include "binabc/population.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// Proposal families over a population of binary chains.
///
/// The difference-based kinds (Xor, DdeMc, DdeMc1, DdeMc2) steer chain i
/// with the xor of two other population members, the binary analogue of a
/// differential-evolution difference vector. The rest are classical:
/// independent Bernoulli resampling, per-bit mutation, and mixtures of
/// mutation with xor steps or uniform crossover.
enum class KernelKind {
    IndSamp,  // fresh iid Bernoulli(theta) vector, current state ignored
    Mut,      // per-bit flips with probability flip_prob
    MutCrx,   // mix_weight: mutation, else uniform crossover with a random member
    MutXor,   // mix_weight: mutation, else xor with a population difference
    Xor,      // xor with a population difference
    DdeMc,    // xor with a mutated population difference
    DdeMc1,   // mutation of (state xor population difference)
    DdeMc2,   // xor with (difference xor iid Bernoulli(1/2) vector)
};

std::string_view kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(std::string_view name);

/// A proposal kind plus every hyperparameter any kind can use. Fields that
/// a kind ignores are carried but unused, so one spec type serves the whole
/// configuration surface.
struct KernelSpec {
    KernelKind kind = KernelKind::DdeMc;
    double flip_prob = 0.01;  // per-bit flip probability of the mutation part
    double mix_weight = 0.5;  // probability of picking the mutation branch
    double theta = 0.5;       // Bernoulli parameter of independent resampling

    bool uses_flip_prob() const;
    bool uses_mix_weight() const;
    bool uses_theta() const;

    /// Whether q(x'|x, rest) == q(x|x', rest) for all states. Crossover
    /// mixtures are not symmetric; independent resampling only at theta 1/2.
    bool symmetric() const;

    /// Whether every candidate state has positive proposal probability from
    /// every current state (given a population of distinct helpers or not).
    bool irreducible() const;

    void validate() const;

    bool operator==(const KernelSpec&) const = default;
};

/// Difference vector for chain i: xor of two distinct members drawn
/// uniformly over ordered pairs from the population excluding i itself.
/// Needs at least three chains.
BitVector delta_sample(std::size_t i, const Population& pop, RngStream& rng);

/// Uniform crossover: each bit comes from `partner` with probability 1/2,
/// otherwise from `x`. One uniform per bit, in index order.
BitVector crossover(const BitVector& x, const BitVector& partner, RngStream& rng);

/// One proposal for chain i from its kernel. Draw order is fixed: mixture
/// branch indicator first (if any), then the branch's own draws; difference
/// indices before any mutation uniforms.
BitVector propose(const KernelSpec& spec, std::size_t i, const Population& pop,
                  RngStream& rng);

}  // namespace binabc
