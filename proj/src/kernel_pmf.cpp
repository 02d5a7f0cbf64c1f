#include "binabc/kernel_pmf.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace binabc {

namespace {

std::uint32_t bits_of(const BitVector& v) {
    return static_cast<std::uint32_t>(v.words()[0]);
}

BitVector bv_of(std::uint32_t bits, std::size_t dim) {
    BitVector v(dim);
    for (std::size_t d = 0; d < dim; ++d)
        if ((bits >> d) & 1u)
            v.set_bit(d, true);
    return v;
}

// weights[k] = p^k (1-p)^(dim-k): probability of one mutation realization
// that flips exactly k named bits.
std::vector<double> flip_weights(double p, std::size_t dim) {
    std::vector<double> w(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
        double v = 1.0;
        for (std::size_t j = 0; j < k; ++j)
            v *= p;
        for (std::size_t j = 0; j < dim - k; ++j)
            v *= 1.0 - p;
        w[k] = v;
    }
    return w;
}

// All ordered pairs of distinct members excluding chain i, each with the
// probability delta_sample assigns it.
struct DeltaPool {
    std::vector<std::uint32_t> deltas;
    double pair_weight = 0.0;
};

DeltaPool delta_pool(std::size_t i, const Population& pop) {
    if (pop.size() < 3)
        throw std::invalid_argument(
            "proposal_pmf_exact: population smaller than 3 cannot form a difference");
    DeltaPool pool;
    const std::size_t n = pop.size() - 1;
    pool.pair_weight = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
    for (std::size_t j = 0; j < pop.size(); ++j) {
        if (j == i)
            continue;
        for (std::size_t k = 0; k < pop.size(); ++k) {
            if (k == i || k == j)
                continue;
            pool.deltas.push_back(bits_of(pop[j]) ^ bits_of(pop[k]));
        }
    }
    return pool;
}

using Dense = std::vector<double>;

Dense pmf_ind_samp(double theta, std::size_t dim) {
    const auto w = flip_weights(theta, dim);
    Dense pmf(std::size_t{1} << dim);
    for (std::uint32_t s = 0; s < pmf.size(); ++s)
        pmf[s] = w[static_cast<std::size_t>(std::popcount(s))];
    return pmf;
}

Dense pmf_mut(std::uint32_t x, double p, std::size_t dim) {
    const auto w = flip_weights(p, dim);
    Dense pmf(std::size_t{1} << dim);
    for (std::uint32_t s = 0; s < pmf.size(); ++s)
        pmf[s] = w[static_cast<std::size_t>(std::popcount(s ^ x))];
    return pmf;
}

Dense pmf_xor(std::uint32_t x, const DeltaPool& pool, std::size_t dim) {
    Dense pmf(std::size_t{1} << dim, 0.0);
    for (const auto d : pool.deltas)
        pmf[x ^ d] += pool.pair_weight;
    return pmf;
}

Dense pmf_dde_mc(std::uint32_t x, const DeltaPool& pool, double p, std::size_t dim) {
    const auto w = flip_weights(p, dim);
    Dense pmf(std::size_t{1} << dim, 0.0);
    // x' = x ^ mutate(delta): the mutation must flip exactly delta ^ (x ^ x').
    for (const auto d : pool.deltas)
        for (std::uint32_t s = 0; s < pmf.size(); ++s)
            pmf[s] += pool.pair_weight *
                      w[static_cast<std::size_t>(std::popcount(d ^ (x ^ s)))];
    return pmf;
}

Dense pmf_dde_mc1(std::uint32_t x, const DeltaPool& pool, double p, std::size_t dim) {
    const auto w = flip_weights(p, dim);
    Dense pmf(std::size_t{1} << dim, 0.0);
    // x' = mutate(x ^ delta): the mutation must flip exactly (x ^ delta) ^ x'.
    for (const auto d : pool.deltas)
        for (std::uint32_t s = 0; s < pmf.size(); ++s)
            pmf[s] += pool.pair_weight *
                      w[static_cast<std::size_t>(std::popcount((x ^ d) ^ s))];
    return pmf;
}

Dense pmf_dde_mc2(const DeltaPool& pool, std::size_t dim) {
    // delta ^ Bernoulli(1/2) noise is uniform whatever delta is, so the
    // proposal is uniform over all states.
    Dense pmf(std::size_t{1} << dim, 0.0);
    const double uniform = 1.0 / static_cast<double>(pmf.size());
    const double per_pair = pool.pair_weight * uniform * static_cast<double>(pool.deltas.size());
    for (std::uint32_t s = 0; s < pmf.size(); ++s)
        pmf[s] += per_pair;
    return pmf;
}

Dense pmf_crossover_part(std::uint32_t x, std::size_t i, const Population& pop,
                         std::size_t dim) {
    if (pop.size() < 2)
        throw std::invalid_argument("proposal_pmf_exact: crossover needs a second chain");
    Dense pmf(std::size_t{1} << dim, 0.0);
    const double partner_weight = 1.0 / static_cast<double>(pop.size() - 1);
    for (std::size_t j = 0; j < pop.size(); ++j) {
        if (j == i)
            continue;
        const std::uint32_t diff = x ^ bits_of(pop[j]);
        // Reachable states differ from x only where the partner differs;
        // each such state has probability (1/2)^dim regardless of which of
        // the differing bits were taken (matching bits are taken either way).
        double state_prob = partner_weight;
        for (std::size_t d = 0; d < dim; ++d)
            state_prob *= 0.5;
        const double scale =
            state_prob * static_cast<double>(std::uint64_t{1}
                                             << (dim - static_cast<std::size_t>(std::popcount(diff))));
        std::uint32_t sub = diff;
        for (;;) {
            pmf[x ^ sub] += scale;
            if (sub == 0)
                break;
            sub = (sub - 1) & diff;
        }
    }
    return pmf;
}

void mix_into(Dense& acc, const Dense& part, double weight) {
    for (std::size_t s = 0; s < acc.size(); ++s)
        acc[s] += weight * part[s];
}

}  // namespace

std::map<BitVector, double> proposal_pmf_exact(const KernelSpec& spec, std::size_t i,
                                               const Population& pop) {
    spec.validate();
    if (i >= pop.size())
        throw std::out_of_range("proposal_pmf_exact: chain index out of range");
    const std::size_t dim = pop.dim();
    if (dim > 16)
        throw std::invalid_argument("proposal_pmf_exact: dimension too large to enumerate");

    const std::uint32_t x = bits_of(pop[i]);
    Dense pmf;

    switch (spec.kind) {
    case KernelKind::IndSamp:
        pmf = pmf_ind_samp(spec.theta, dim);
        break;
    case KernelKind::Mut:
        pmf = pmf_mut(x, spec.flip_prob, dim);
        break;
    case KernelKind::Xor:
        pmf = pmf_xor(x, delta_pool(i, pop), dim);
        break;
    case KernelKind::DdeMc:
        pmf = pmf_dde_mc(x, delta_pool(i, pop), spec.flip_prob, dim);
        break;
    case KernelKind::DdeMc1:
        pmf = pmf_dde_mc1(x, delta_pool(i, pop), spec.flip_prob, dim);
        break;
    case KernelKind::DdeMc2:
        pmf = pmf_dde_mc2(delta_pool(i, pop), dim);
        break;
    case KernelKind::MutXor: {
        pmf.assign(std::size_t{1} << dim, 0.0);
        mix_into(pmf, pmf_mut(x, spec.flip_prob, dim), spec.mix_weight);
        mix_into(pmf, pmf_xor(x, delta_pool(i, pop), dim), 1.0 - spec.mix_weight);
        break;
    }
    case KernelKind::MutCrx: {
        pmf.assign(std::size_t{1} << dim, 0.0);
        mix_into(pmf, pmf_mut(x, spec.flip_prob, dim), spec.mix_weight);
        mix_into(pmf, pmf_crossover_part(x, i, pop, dim), 1.0 - spec.mix_weight);
        break;
    }
    }

    std::map<BitVector, double> out;
    for (std::uint32_t s = 0; s < pmf.size(); ++s)
        if (pmf[s] > 0.0)
            out.emplace(bv_of(s, dim), pmf[s]);
    return out;
}

double pmf_value(const std::map<BitVector, double>& pmf, const BitVector& x) {
    const auto it = pmf.find(x);
    return it == pmf.end() ? 0.0 : it->second;
}

}  // namespace binabc
