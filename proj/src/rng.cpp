#include "binabc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace binabc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("RngStream::next_below: n must be positive");
    // Reject the tail of the 2^64 range that does not divide evenly by n.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold)
            return r % n;
    }
}

RngStream RngStream::substream(std::uint64_t label) const {
    return RngStream(mix64(root_ ^ mix64((label + 1) * kGolden)));
}

RngStream RngStream::substream(std::string_view label) const {
    return substream(fnv1a64(label));
}

double beta_sample(double a, double b, RngStream& rng) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("beta_sample: shape parameters must be positive");
    for (;;) {
        const double x = std::pow(rng.next_open01(), 1.0 / a);
        const double y = std::pow(rng.next_open01(), 1.0 / b);
        const double s = x + y;
        if (s > 0.0 && s <= 1.0) {
            const double r = x / s;
            if (r > 0.0 && r < 1.0)
                return r;
        }
    }
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace binabc
