#pragma once

#include <cstddef>
#include <map>

#include "binabc/bitvector.hpp"
#include "binabc/kernels.hpp"
#include "binabc/population.hpp"

namespace binabc {

/// Exact proposal distribution q(x' | chain i, population) by enumeration
/// over all 2^dim states. Feasible up to dim 16; larger dimensions throw.
/// The returned map holds exactly the support: states with zero probability
/// are absent, and the present values sum to 1 up to rounding.
std::map<BitVector, double> proposal_pmf_exact(const KernelSpec& spec, std::size_t i,
                                               const Population& pop);

/// Probability of one state under a PMF map; zero when absent.
double pmf_value(const std::map<BitVector, double>& pmf, const BitVector& x);

}  // namespace binabc
