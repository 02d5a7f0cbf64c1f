#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "binabc/rng.hpp"

namespace binabc {

/// Fixed-dimension binary vector packed into 64-bit words.
///
/// Bit i lives at word i/64, position i%64. Every operation keeps the
/// padding bits above dim() zero, so popcount and word-level xor never see
/// garbage. Textual form is most-significant-position first: the first
/// character of to_string() is bit dim()-1.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t dim);

    static BitVector zeros(std::size_t dim) { return BitVector(dim); }
    static BitVector ones(std::size_t dim);
    static BitVector from_string(std::string_view s);

    std::size_t dim() const { return dim_; }

    bool bit(std::size_t i) const;
    void set_bit(std::size_t i, bool value);
    void flip_bit(std::size_t i);

    std::size_t popcount() const;
    BitVector complement() const;

    /// Bits [start, start+len) as a new vector; bit k of the result is bit
    /// start+k of this one.
    BitVector slice(std::size_t start, std::size_t len) const;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }

    std::string to_string() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitVector&) const = default;
    auto operator<=>(const BitVector&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> words_;

    void mask_tail();
};

std::size_t hamming(const BitVector& a, const BitVector& b);

/// Independent per-bit flips with the given probability. One uniform is
/// drawn per bit, in index order, whatever the probability, so the stream
/// position after a call depends only on the dimension.
BitVector mutate(const BitVector& x, double flip_prob, RngStream& rng);

/// Vector of independent Bernoulli(theta) bits, drawn in index order.
BitVector bernoulli_vector(std::size_t dim, double theta, RngStream& rng);

}  // namespace binabc
