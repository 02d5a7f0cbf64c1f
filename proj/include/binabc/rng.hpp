#pragma once

#include <cstdint>
#include <string_view>

namespace binabc {

/// Splittable seeded random stream (splitmix64 core).
///
/// Identical seeds give identical draw sequences on every platform; all
/// distributions below are built from the raw 64-bit output, never from
/// libc or libstdc++ distribution objects. Substreams are derived from the
/// original seed and a label, so a run can address an independent,
/// reproducible stream per (kernel, repeat, purpose) tuple no matter how
/// much of the parent stream has been consumed.
///
/// A stream is single-owner; concurrent users must derive substreams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : root_(seed), state_(seed) {}

    std::uint64_t seed() const { return root_; }

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double();

    /// Uniform in (0, 1), never exactly 0 or 1.
    double next_open01();

    bool next_bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n), n > 0. Rejection sampled, no modulo bias.
    std::uint64_t next_below(std::uint64_t n);

    RngStream substream(std::uint64_t label) const;
    RngStream substream(std::string_view label) const;

private:
    std::uint64_t root_;
    std::uint64_t state_;
};

/// Beta(a, b) variate via Johnk's method; shapes must be positive.
/// Result is strictly inside (0, 1).
double beta_sample(double a, double b, RngStream& rng);

std::uint64_t fnv1a64(std::string_view s);

}  // namespace binabc
