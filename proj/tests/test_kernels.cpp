#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "binabc/kernels.hpp"
#include "binabc/population.hpp"
#include "binabc/rng.hpp"

using namespace binabc;

namespace {

Population pop_of(std::initializer_list<const char*> states) {
    std::vector<BitVector> chains;
    for (const char* s : states)
        chains.push_back(BitVector::from_string(s));
    return Population(std::move(chains));
}

}  // namespace

TEST_CASE("kernel kind names round trip") {
    for (const KernelKind kind :
         {KernelKind::IndSamp, KernelKind::Mut, KernelKind::MutCrx, KernelKind::MutXor,
          KernelKind::Xor, KernelKind::DdeMc, KernelKind::DdeMc1, KernelKind::DdeMc2})
        CHECK(kernel_kind_from_name(kernel_kind_name(kind)) == kind);
    CHECK_THROWS_AS(kernel_kind_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("spec predicates") {
    KernelSpec spec;
    spec.kind = KernelKind::MutCrx;
    CHECK_FALSE(spec.symmetric());
    spec.kind = KernelKind::IndSamp;
    spec.theta = 0.5;
    CHECK(spec.symmetric());
    spec.theta = 0.6;
    CHECK_FALSE(spec.symmetric());
    spec.kind = KernelKind::DdeMc;
    CHECK(spec.symmetric());
    spec.flip_prob = 0.01;
    CHECK(spec.irreducible());
    spec.flip_prob = 0.0;
    CHECK_FALSE(spec.irreducible());
    spec.kind = KernelKind::Xor;
    CHECK_FALSE(spec.irreducible());
    spec.kind = KernelKind::DdeMc2;
    CHECK(spec.irreducible());

    spec.flip_prob = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("delta_sample needs three chains and a valid index") {
    RngStream rng(20);
    Population two = pop_of({"00", "01"});
    bool threw = false;
    try {
        delta_sample(0, two, rng);
    } catch (const std::invalid_argument& e) {
        threw = true;
        CHECK(std::string(e.what()).find("population smaller than 3") != std::string::npos);
    }
    CHECK(threw);
    Population three = pop_of({"00", "01", "10"});
    CHECK_THROWS_AS(delta_sample(3, three, rng), std::out_of_range);
}

TEST_CASE("delta_sample with three chains is the xor of the other two") {
    RngStream rng(21);
    const Population pop = pop_of({"0001", "0010", "0100"});
    const BitVector expected = BitVector::from_string("0110");
    for (int t = 0; t < 50; ++t)
        CHECK(delta_sample(0, pop, rng) == expected);
}

TEST_CASE("delta_sample is uniform over ordered pairs excluding self") {
    RngStream rng(22);
    // Distinct pairwise xors so the empirical law identifies the pair.
    const Population pop = pop_of({"1000", "0001", "0010", "0100"});
    std::map<std::string, int> counts;
    const int draws = 30000;
    for (int t = 0; t < draws; ++t)
        ++counts[delta_sample(0, pop, rng).to_string()];
    REQUIRE(counts.size() == 3);
    // Each unordered pair appears via both orders: probability 1/3 each.
    const double expect = draws / 3.0;
    const double sd = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
    for (const auto& [delta, count] : counts) {
        CHECK(std::abs(count - expect) < 4.5 * sd);
    }
    CHECK(counts.count("0011") == 1);
    CHECK(counts.count("0110") == 1);
    CHECK(counts.count("0101") == 1);
}

TEST_CASE("crossover keeps matching bits and mixes differing ones") {
    RngStream rng(23);
    const BitVector x = BitVector::from_string("110000");
    const BitVector w = BitVector::from_string("110111");
    for (int t = 0; t < 200; ++t) {
        const BitVector child = crossover(x, w, rng);
        CHECK(child.bit(5));
        CHECK(child.bit(4));
        CHECK_FALSE(child.bit(3));
    }
    CHECK(crossover(x, x, rng) == x);
    CHECK_THROWS_AS(crossover(x, BitVector::zeros(3), rng), std::invalid_argument);
}

TEST_CASE("propose dispatches every kind deterministically") {
    const Population pop = pop_of({"00110", "01010", "10001", "11100"});
    for (const KernelKind kind :
         {KernelKind::IndSamp, KernelKind::Mut, KernelKind::MutCrx, KernelKind::MutXor,
          KernelKind::Xor, KernelKind::DdeMc, KernelKind::DdeMc1, KernelKind::DdeMc2}) {
        KernelSpec spec;
        spec.kind = kind;
        spec.flip_prob = 0.2;
        RngStream a(24), b(24);
        const BitVector pa = propose(spec, 1, pop, a);
        const BitVector pb = propose(spec, 1, pop, b);
        CHECK(pa == pb);
        CHECK(pa.dim() == 5);
    }
    KernelSpec spec;
    RngStream rng(25);
    CHECK_THROWS_AS(propose(spec, 4, pop, rng), std::out_of_range);
}

TEST_CASE("mixture weight limits collapse to the pure branches") {
    const Population pop = pop_of({"0011", "0101", "1001"});
    RngStream rng(26);

    KernelSpec mut_only;
    mut_only.kind = KernelKind::MutXor;
    mut_only.mix_weight = 1.0;
    mut_only.flip_prob = 0.0;
    for (int t = 0; t < 50; ++t)
        CHECK(propose(mut_only, 0, pop, rng) == pop[0]);

    KernelSpec xor_only;
    xor_only.kind = KernelKind::MutXor;
    xor_only.mix_weight = 0.0;
    const BitVector expected = pop[0] ^ (pop[1] ^ pop[2]);
    for (int t = 0; t < 50; ++t)
        CHECK(propose(xor_only, 0, pop, rng) == expected);
}

TEST_CASE("difference kernels allow self proposals through zero deltas") {
    const Population pop = pop_of({"0011", "0101", "0101"});
    KernelSpec spec;
    spec.kind = KernelKind::Xor;
    RngStream rng(27);
    // Chains 1 and 2 are identical, so their difference is zero and the
    // proposal equals the current state.
    for (int t = 0; t < 50; ++t)
        CHECK(propose(spec, 0, pop, rng) == pop[0]);
}

TEST_CASE("flip probability limits remain valid proposals") {
    const Population pop = pop_of({"0011", "0101", "1001"});
    const BitVector delta = pop[1] ^ pop[2];
    KernelSpec spec;
    spec.kind = KernelKind::DdeMc;
    RngStream rng(28);

    spec.flip_prob = 0.0;
    CHECK(propose(spec, 0, pop, rng) == (pop[0] ^ delta));
    spec.flip_prob = 1.0;
    CHECK(propose(spec, 0, pop, rng) == (pop[0] ^ delta.complement()));
}

TEST_CASE("population enforces equal dimensions") {
    std::vector<BitVector> chains;
    chains.push_back(BitVector::zeros(3));
    chains.push_back(BitVector::zeros(4));
    CHECK_THROWS_AS(Population(std::move(chains)), std::invalid_argument);
    CHECK_THROWS_AS(Population(std::vector<BitVector>{}), std::invalid_argument);

    Population pop = pop_of({"01", "10"});
    CHECK_THROWS_AS(pop.set(0, BitVector::zeros(3)), std::invalid_argument);
    CHECK_THROWS_AS(pop.set(2, BitVector::zeros(2)), std::out_of_range);
    pop.set(0, BitVector::from_string("11"));
    CHECK(pop[0].to_string() == "11");
}
