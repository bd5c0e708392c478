#include <doctest.h>

#include "compiled_poly.hpp"
#include "cqc/families.hpp"
#include "cqc/solve.hpp"
#include "test_support.hpp"

using namespace cqc;
using namespace testsupport;

TEST_SUITE_BEGIN("solve");

namespace {

ProblemInstance family_generic(Family f, int i) {
    const FamilyInstance fam = gen_family(f, i);
    return std::get<ProblemInstance>(build_generic(fam.q1, fam.q2));
}

ProblemInstance constant_instance(long long value, long long d) {
    ProblemInstance inst;
    inst.p = BinaryPolynomial(0);
    inst.p.add_term(value, {});
    inst.ac_part = inst.p;
    inst.d = d;
    return inst;
}

}  // namespace

TEST_CASE("incremental flip deltas match evaluate differences") {
    Rng rng(0xDE17A);
    for (int trial = 0; trial < 200; ++trial) {
        const BinaryPolynomial p = random_polynomial(rng, 10, 4);
        const detail::CompiledPoly compiled(p);
        const int n = p.num_vars();
        std::vector<std::uint8_t> x(n);
        for (auto& b : x) b = static_cast<std::uint8_t>(rng.below(2));
        const long long base = p.evaluate(x);
        CHECK(compiled.evaluate(x) == base);
        for (VarId v = 0; v < static_cast<VarId>(n); ++v) {
            std::vector<std::uint8_t> flipped = x;
            flipped[v] ^= 1;
            CHECK(compiled.flip_delta(x, v) == p.evaluate(flipped) - base);
        }
    }
}

TEST_CASE("brute force on 2-cycle-to-1-chain") {
    const BruteForceResult res = brute_force_min(family_generic(Family::CycleChain, 1));
    CHECK(res.min_value == -1);
    REQUIRE(res.argmins.size() == 2);
    CHECK(res.argmins[0] == bits_of("0110"));  // lexicographic order
    CHECK(res.argmins[1] == bits_of("1001"));
}

TEST_CASE("brute force on 2-chain-to-1-star") {
    const BruteForceResult res = brute_force_min(family_generic(Family::ChainStar, 1));
    CHECK(res.min_value == -1);
    REQUIRE(res.argmins.size() == 2);
    CHECK(res.argmins[0] == bits_of("010001"));
    CHECK(res.argmins[1] == bits_of("100010"));
}

TEST_CASE("brute force on a constant polynomial") {
    const BruteForceResult res = brute_force_min(constant_instance(-2, -2));
    CHECK(res.min_value == -2);
    REQUIRE(res.argmins.size() == 1);
    CHECK(res.argmins[0].empty());
}

TEST_CASE("brute force respects the cap") {
    CHECK_THROWS_AS(brute_force_min(family_generic(Family::CycleChain, 3), 100.0),
                    CapExceededError);
}

TEST_CASE("constrained brute force enumerates one-hot states only") {
    const ProblemInstance inst =
        apply_constraints(family_generic(Family::CycleChain, 2));
    const BruteForceResult res = brute_force_min(inst);
    CHECK(res.min_value == -2);
    REQUIRE(res.argmins.size() == 2);
    CHECK(res.argmins[0] == bits_of("011001"));
    CHECK(res.argmins[1] == bits_of("100110"));
    // count matches 2^(i+1) feasible states
    CHECK(inst.search_space_size() == 8);
}

TEST_CASE("simulated annealing finds the chain optimum") {
    const ProblemInstance inst = family_generic(Family::CycleChain, 2);
    AnnealConfig cfg;
    cfg.seed = 42;
    const SampleSet samples = simulated_anneal(inst, cfg);
    CHECK(samples.total_count() == 500);
    CHECK(samples.best_energy() == -2);  // optimum verified by brute force
    CHECK(solution_probability(samples, -2) > 0.0);
    for (const SampleEntry& e : samples.entries)
        CHECK(e.energy == inst.p.evaluate(e.bits));
}

TEST_CASE("simulated annealing on a constant polynomial") {
    AnnealConfig cfg;
    cfg.num_reads = 20;
    const SampleSet samples = simulated_anneal(constant_instance(-2, -2), cfg);
    CHECK(samples.entries.size() == 1);
    CHECK(samples.entries[0].energy == -2);
    CHECK(solution_probability(samples, -2) == 1.0);
}

TEST_CASE("simulated annealing nearly always solves a mid-size star") {
    const ProblemInstance inst = family_generic(Family::ChainStar, 6);
    AnnealConfig cfg;
    cfg.seed = 7;
    const SampleSet samples = simulated_anneal(inst, cfg);
    CHECK(solution_probability(samples, inst.d) > 0.9);
}

TEST_CASE("simulated annealing is deterministic per seed") {
    const ProblemInstance inst = family_generic(Family::CycleChain, 3);
    AnnealConfig cfg;
    cfg.seed = 123;
    cfg.num_reads = 50;
    const SampleSet a = simulated_anneal(inst, cfg);
    const SampleSet b = simulated_anneal(inst, cfg);
    CHECK(a.entries == b.entries);
    cfg.seed = 124;
    const SampleSet c = simulated_anneal(inst, cfg);
    CHECK(a.entries != c.entries);
}

TEST_CASE("greedy annealing stays in a strict local minimum") {
    // LRRL is a strict local minimum of the i=3 chain instance at energy -2
    const ProblemInstance inst = family_generic(Family::CycleChain, 3);
    AnnealConfig cfg;
    cfg.greedy = true;
    cfg.num_reads = 10;
    cfg.num_sweeps = 200;
    cfg.fixed_start = bits_of("10010110");
    REQUIRE(inst.p.evaluate(*cfg.fixed_start) == -2);
    const SampleSet samples = simulated_anneal(inst, cfg);
    REQUIRE(samples.entries.size() == 1);
    CHECK(samples.entries[0].bits == *cfg.fixed_start);
    CHECK(samples.entries[0].energy == -2);
}

TEST_CASE("greedy annealing never ends above its start energy") {
    const ProblemInstance inst = family_generic(Family::ChainStar, 2);
    AnnealConfig cfg;
    cfg.greedy = true;
    cfg.seed = 5;
    cfg.num_reads = 100;
    cfg.num_sweeps = 50;
    // all-zero start has energy 0; greedy runs can only go down
    cfg.fixed_start = std::vector<std::uint8_t>(inst.p.num_vars(), 0);
    const SampleSet samples = simulated_anneal(inst, cfg);
    for (const SampleEntry& e : samples.entries) CHECK(e.energy <= 0);
}

TEST_CASE("constrained annealing emits only one-hot states") {
    const ProblemInstance inst =
        apply_constraints(family_generic(Family::ChainStar, 3));
    AnnealConfig cfg;
    cfg.seed = 9;
    cfg.num_reads = 200;
    const SampleSet samples = simulated_anneal(inst, cfg);
    for (const SampleEntry& e : samples.entries) {
        for (const auto& group : *inst.groups) {
            int ones = 0;
            for (VarId v : group) ones += e.bits[v];
            CHECK(ones == 1);
        }
    }
    CHECK(solution_probability(samples, inst.d) > 0.0);
}

TEST_CASE("single-proposal sweeps match the literal loop count") {
    const ProblemInstance inst = family_generic(Family::CycleChain, 1);
    AnnealConfig cfg;
    cfg.proposals_per_sweep = 1;
    cfg.num_reads = 5;
    cfg.num_sweeps = 10;
    const SampleSet samples = simulated_anneal(inst, cfg);
    CHECK(samples.total_count() == 5);
}

TEST_CASE("solution_probability arithmetic") {
    SampleSet s;
    s.entries = {{bits_of("10"), -2, 50}, {bits_of("01"), 0, 450}};
    CHECK(solution_probability(s, -2) == doctest::Approx(0.1));
    CHECK(at_least_one_probability(0.1, 20) == doctest::Approx(0.878423345));

    SampleSet all;
    all.entries = {{bits_of("10"), -2, 7}};
    CHECK(solution_probability(all, -2) == 1.0);

    SampleSet empty;
    CHECK_THROWS_AS(solution_probability(empty, 0), Error);
}

TEST_CASE("invalid anneal configs are rejected") {
    AnnealConfig cfg;
    cfg.beta_start = 5.0;
    cfg.beta_end = 1.0;
    CHECK_THROWS_AS(simulated_anneal(family_generic(Family::CycleChain, 1), cfg),
                    std::invalid_argument);
    cfg = {};
    cfg.num_sweeps = 0;
    CHECK_THROWS_AS(simulated_anneal(family_generic(Family::CycleChain, 1), cfg),
                    std::invalid_argument);
}

TEST_CASE("sample CSV export") {
    SampleSet s;
    s.entries = {{bits_of("0110"), -1, 3}, {bits_of("1001"), -1, 2}};
    CHECK(sample_set_to_csv(s) ==
          "assignment_bits,energy,count\n0110,-1,3\n1001,-1,2\n");
}

TEST_SUITE_END();
