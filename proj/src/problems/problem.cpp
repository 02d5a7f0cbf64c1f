#include "binabc/problems/problem.hpp"

#include <cmath>

namespace binabc {

double boltzmann_log_prior(const BitVector& x) {
    return -static_cast<double>(x.popcount()) / static_cast<double>(x.dim());
}

BitVector boltzmann_sample_prior(std::size_t dim, RngStream& rng) {
    // The form factorizes per bit: p(bit on) / p(bit off) = exp(-1/dim).
    const double p_on = 1.0 / (1.0 + std::exp(1.0 / static_cast<double>(dim)));
    return bernoulli_vector(dim, p_on, rng);
}

}  // namespace binabc
