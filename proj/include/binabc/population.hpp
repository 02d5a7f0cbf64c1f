#pragma once

#include <cstddef>
#include <vector>

#include "binabc/bitvector.hpp"

namespace binabc {

/// Ordered collection of equal-dimension chain states; the joint state of
/// one population sweep. Chain index identifies a member for the whole run.
class Population {
public:
    Population() = default;
    explicit Population(std::vector<BitVector> chains);

    std::size_t size() const { return chains_.size(); }
    std::size_t dim() const;

    const BitVector& operator[](std::size_t i) const { return chains_[i]; }
    void set(std::size_t i, BitVector x);

    auto begin() const { return chains_.begin(); }
    auto end() const { return chains_.end(); }

    bool operator==(const Population&) const = default;

private:
    std::vector<BitVector> chains_;
};

}  // namespace binabc
