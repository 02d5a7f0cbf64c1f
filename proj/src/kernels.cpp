#include "binabc/kernels.hpp"

#include <stdexcept>
#include <string>

namespace binabc {

std::string_view kernel_kind_name(KernelKind kind) {
    switch (kind) {
    case KernelKind::IndSamp: return "ind-samp";
    case KernelKind::Mut:     return "mut";
    case KernelKind::MutCrx:  return "mut+crx";
    case KernelKind::MutXor:  return "mut+xor";
    case KernelKind::Xor:     return "xor";
    case KernelKind::DdeMc:   return "dde-mc";
    case KernelKind::DdeMc1:  return "dde-mc1";
    case KernelKind::DdeMc2:  return "dde-mc2";
    }
    throw std::invalid_argument("kernel_kind_name: unknown kind");
}

KernelKind kernel_kind_from_name(std::string_view name) {
    if (name == "ind-samp") return KernelKind::IndSamp;
    if (name == "mut")      return KernelKind::Mut;
    if (name == "mut+crx")  return KernelKind::MutCrx;
    if (name == "mut+xor")  return KernelKind::MutXor;
    if (name == "xor")      return KernelKind::Xor;
    if (name == "dde-mc")   return KernelKind::DdeMc;
    if (name == "dde-mc1")  return KernelKind::DdeMc1;
    if (name == "dde-mc2")  return KernelKind::DdeMc2;
    throw std::invalid_argument("unknown kernel kind: " + std::string(name));
}

bool KernelSpec::uses_flip_prob() const {
    switch (kind) {
    case KernelKind::Mut:
    case KernelKind::MutCrx:
    case KernelKind::MutXor:
    case KernelKind::DdeMc:
    case KernelKind::DdeMc1:
        return true;
    default:
        return false;
    }
}

bool KernelSpec::uses_mix_weight() const {
    return kind == KernelKind::MutCrx || kind == KernelKind::MutXor;
}

bool KernelSpec::uses_theta() const {
    return kind == KernelKind::IndSamp;
}

bool KernelSpec::symmetric() const {
    if (kind == KernelKind::MutCrx)
        return false;
    if (kind == KernelKind::IndSamp)
        return theta == 0.5;
    return true;
}

bool KernelSpec::irreducible() const {
    switch (kind) {
    case KernelKind::IndSamp:
        return theta > 0.0 && theta < 1.0;
    case KernelKind::Mut:
        return flip_prob > 0.0 && flip_prob < 1.0;
    case KernelKind::MutCrx:
    case KernelKind::MutXor:
        return mix_weight > 0.0 && flip_prob > 0.0 && flip_prob < 1.0;
    case KernelKind::DdeMc:
    case KernelKind::DdeMc1:
        return flip_prob > 0.0 && flip_prob < 1.0;
    case KernelKind::DdeMc2:
        return true;
    case KernelKind::Xor:
        return false;  // support limited to reachable population differences
    }
    return false;
}

void KernelSpec::validate() const {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0))
        throw std::invalid_argument("kernel: flip_prob must lie in [0, 1]");
    if (!(mix_weight >= 0.0 && mix_weight <= 1.0))
        throw std::invalid_argument("kernel: mix_weight must lie in [0, 1]");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("kernel: theta must lie in [0, 1]");
}

BitVector delta_sample(std::size_t i, const Population& pop, RngStream& rng) {
    if (pop.size() < 3)
        throw std::invalid_argument(
            "delta_sample: population smaller than 3 cannot form a difference");
    if (i >= pop.size())
        throw std::out_of_range("delta_sample: chain index out of range");
    // Uniform ordered pair (a, b), a != b, over the population minus chain i.
    const std::uint64_t n = pop.size() - 1;
    const std::uint64_t a = rng.next_below(n);
    std::uint64_t b = rng.next_below(n - 1);
    if (b >= a)
        ++b;
    const auto skip_self = [i](std::uint64_t idx) {
        return static_cast<std::size_t>(idx) < i ? static_cast<std::size_t>(idx)
                                                 : static_cast<std::size_t>(idx) + 1;
    };
    return pop[skip_self(a)] ^ pop[skip_self(b)];
}

BitVector crossover(const BitVector& x, const BitVector& partner, RngStream& rng) {
    if (x.dim() != partner.dim())
        throw std::invalid_argument("crossover: mismatched dimensions");
    BitVector out = x;
    for (std::size_t d = 0; d < x.dim(); ++d)
        if (rng.next_bernoulli(0.5))
            out.set_bit(d, partner.bit(d));
    return out;
}

BitVector propose(const KernelSpec& spec, std::size_t i, const Population& pop,
                  RngStream& rng) {
    spec.validate();
    if (i >= pop.size())
        throw std::out_of_range("propose: chain index out of range");
    const BitVector& x = pop[i];

    switch (spec.kind) {
    case KernelKind::IndSamp:
        return bernoulli_vector(x.dim(), spec.theta, rng);

    case KernelKind::Mut:
        return mutate(x, spec.flip_prob, rng);

    case KernelKind::Xor:
        return x ^ delta_sample(i, pop, rng);

    case KernelKind::MutXor:
        if (rng.next_bernoulli(spec.mix_weight))
            return mutate(x, spec.flip_prob, rng);
        return x ^ delta_sample(i, pop, rng);

    case KernelKind::MutCrx: {
        if (rng.next_bernoulli(spec.mix_weight))
            return mutate(x, spec.flip_prob, rng);
        if (pop.size() < 2)
            throw std::invalid_argument("propose: crossover needs a second chain");
        std::uint64_t p = rng.next_below(pop.size() - 1);
        if (p >= i)
            ++p;
        return crossover(x, pop[static_cast<std::size_t>(p)], rng);
    }

    case KernelKind::DdeMc:
        return x ^ mutate(delta_sample(i, pop, rng), spec.flip_prob, rng);

    case KernelKind::DdeMc1:
        return mutate(x ^ delta_sample(i, pop, rng), spec.flip_prob, rng);

    case KernelKind::DdeMc2: {
        const BitVector delta = delta_sample(i, pop, rng);
        return x ^ (delta ^ bernoulli_vector(x.dim(), 0.5, rng));
    }
    }
    throw std::invalid_argument("propose: unknown kernel kind");
}

}  // namespace binabc
