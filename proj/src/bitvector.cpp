#include "binabc/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace binabc {

namespace {

std::size_t word_count(std::size_t dim) {
    return (dim + 63) / 64;
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

BitVector::BitVector(std::size_t dim) : dim_(dim), words_(word_count(dim), 0) {
    if (dim == 0)
        throw std::invalid_argument("BitVector: dimension must be positive");
}

BitVector BitVector::ones(std::size_t dim) {
    BitVector v(dim);
    for (auto& w : v.words_)
        w = ~std::uint64_t{0};
    v.mask_tail();
    return v;
}

BitVector BitVector::from_string(std::string_view s) {
    BitVector v(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const char c = s[k];
        if (c != '0' && c != '1')
            throw std::invalid_argument("BitVector::from_string: invalid character");
        if (c == '1')
            v.set_bit(s.size() - 1 - k, true);
    }
    return v;
}

bool BitVector::bit(std::size_t i) const {
    if (i >= dim_)
        throw std::out_of_range("BitVector::bit: index out of range");
    return (words_[i / 64] >> (i % 64)) & 1u;
}

void BitVector::set_bit(std::size_t i, bool value) {
    if (i >= dim_)
        throw std::out_of_range("BitVector::set_bit: index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (value)
        words_[i / 64] |= mask;
    else
        words_[i / 64] &= ~mask;
}

void BitVector::flip_bit(std::size_t i) {
    if (i >= dim_)
        throw std::out_of_range("BitVector::flip_bit: index out of range");
    words_[i / 64] ^= std::uint64_t{1} << (i % 64);
}

std::size_t BitVector::popcount() const {
    std::size_t n = 0;
    for (const auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

BitVector BitVector::complement() const {
    BitVector v = *this;
    for (auto& w : v.words_)
        w = ~w;
    v.mask_tail();
    return v;
}

BitVector BitVector::slice(std::size_t start, std::size_t len) const {
    if (len == 0 || start + len > dim_)
        throw std::out_of_range("BitVector::slice: range out of bounds");
    BitVector out(len);
    const std::size_t base = start / 64;
    const std::size_t shift = start % 64;
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        std::uint64_t bits = words_[base + w] >> shift;
        if (shift != 0 && base + w + 1 < words_.size())
            bits |= words_[base + w + 1] << (64 - shift);
        out.words_[w] = bits;
    }
    out.mask_tail();
    return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (dim_ != other.dim_)
        throw std::invalid_argument("BitVector: xor of mismatched dimensions");
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= other.words_[w];
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(dim_, '0');
    for (std::size_t i = 0; i < dim_; ++i)
        if (bit(i))
            s[dim_ - 1 - i] = '1';
    return s;
}

void BitVector::mask_tail() {
    const std::size_t rem = dim_ % 64;
    if (rem != 0)
        words_.back() &= (~std::uint64_t{0}) >> (64 - rem);
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("hamming: mismatched dimensions");
    std::size_t n = 0;
    const auto& aw = a.words();
    const auto& bw = b.words();
    for (std::size_t w = 0; w < aw.size(); ++w)
        n += static_cast<std::size_t>(std::popcount(aw[w] ^ bw[w]));
    return n;
}

BitVector mutate(const BitVector& x, double flip_prob, RngStream& rng) {
    check_probability(flip_prob, "mutate: flip probability");
    BitVector out = x;
    for (std::size_t i = 0; i < x.dim(); ++i)
        if (rng.next_bernoulli(flip_prob))
            out.flip_bit(i);
    return out;
}

BitVector bernoulli_vector(std::size_t dim, double theta, RngStream& rng) {
    check_probability(theta, "bernoulli_vector: theta");
    BitVector out(dim);
    for (std::size_t i = 0; i < dim; ++i)
        if (rng.next_bernoulli(theta))
            out.set_bit(i, true);
    return out;
}

}  // namespace binabc
