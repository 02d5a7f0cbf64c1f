#include "binabc/population.hpp"

#include <stdexcept>

namespace binabc {

Population::Population(std::vector<BitVector> chains) : chains_(std::move(chains)) {
    if (chains_.empty())
        throw std::invalid_argument("Population: must hold at least one chain");
    const std::size_t d = chains_.front().dim();
    for (const auto& c : chains_)
        if (c.dim() != d)
            throw std::invalid_argument("Population: chains differ in dimension");
}

std::size_t Population::dim() const {
    if (chains_.empty())
        throw std::logic_error("Population::dim: empty population");
    return chains_.front().dim();
}

void Population::set(std::size_t i, BitVector x) {
    if (i >= chains_.size())
        throw std::out_of_range("Population::set: chain index out of range");
    if (x.dim() != dim())
        throw std::invalid_argument("Population::set: dimension mismatch");
    chains_[i] = std::move(x);
}

}  // namespace binabc
