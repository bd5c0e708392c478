#include <doctest.h>

#include "cqc/families.hpp"
#include "cqc/landscape.hpp"
#include "cqc/solve.hpp"
#include "test_support.hpp"

using namespace cqc;
using namespace testsupport;

TEST_SUITE_BEGIN("landscape");

namespace {

LandscapeReport family_landscape(Family f, int i) {
    const FamilyInstance fam = gen_family(f, i);
    return enumerate_landscape(std::get<ProblemInstance>(build_generic(fam.q1, fam.q2)));
}

}  // namespace

TEST_CASE("chain-star i=1 counts") {
    const LandscapeReport report = family_landscape(Family::ChainStar, 1);
    CHECK(report.pos_count == 48);
    CHECK(report.zero_count == 14);
    CHECK(report.neg_histogram == std::map<long long, long long>{{-1, 2}});
    CHECK(report.total_states() == 64);
}

TEST_CASE("cycle-chain i=1 positive fraction") {
    const LandscapeReport report = family_landscape(Family::CycleChain, 1);
    CHECK(report.p_pos == Rational(7, 16));
}

TEST_CASE("cycle-chain i=3 has the piecewise-optimal local minimum") {
    const LandscapeReport report = family_landscape(Family::CycleChain, 3);
    bool found = false;
    for (const auto& [bits, energy] : report.strict_local_minima)
        if (bits == bits_of("10010110")) {
            found = true;
            CHECK(energy == -2);  // non-global: d = -3
        }
    CHECK(found);
}

TEST_CASE("enumerated fractions equal the closed forms for i = 1..4") {
    for (int i = 1; i <= 4; ++i) {
        for (const Family f : {Family::CycleChain, Family::ChainStar}) {
            const LandscapeReport report = family_landscape(f, i);
            const FamilyFractions cf = closed_form_fractions(f, i);
            CHECK(report.p_pos == cf.p_pos);
            CHECK(report.p_neg_given_notpos == cf.p_neg_given_notpos);
            CHECK(report.p_zero_given_notpos == cf.p_zero_given_notpos);
        }
    }
}

TEST_CASE("star-family strict local minima are exactly the two optima") {
    for (int i = 1; i <= 5; ++i) {
        const FamilyInstance fam = gen_chain_star(i);
        const LandscapeReport report = family_landscape(Family::ChainStar, i);
        REQUIRE(report.strict_local_minima.size() == 2);
        std::vector<std::vector<std::uint8_t>> minima{report.strict_local_minima[0].first,
                                                      report.strict_local_minima[1].first};
        std::vector<std::vector<std::uint8_t>> expected = fam.ground_truth;
        std::sort(minima.begin(), minima.end());
        std::sort(expected.begin(), expected.end());
        CHECK(minima == expected);
        for (const auto& [bits, energy] : report.strict_local_minima) CHECK(energy == -i);
    }
}

TEST_CASE("chain family grows non-global strict local minima") {
    for (int i = 3; i <= 6; ++i) {
        const LandscapeReport report = family_landscape(Family::CycleChain, i);
        bool nonglobal = false;
        for (const auto& [bits, energy] : report.strict_local_minima)
            if (energy > -i) nonglobal = true;
        CHECK(nonglobal);
    }
}

TEST_CASE("star-family zero plateau touches the negative states") {
    const LandscapeReport report = family_landscape(Family::ChainStar, 2);
    CHECK(report.zero_adjacent_to_neg > 0);
}

TEST_CASE("landscape cap and constraint preconditions") {
    const FamilyInstance fam = gen_cycle_chain(2);
    ProblemInstance inst = std::get<ProblemInstance>(build_generic(fam.q1, fam.q2));
    CHECK_THROWS_AS(enumerate_landscape(inst, 4), CapExceededError);
    inst = apply_constraints(std::move(inst));
    CHECK_THROWS_AS(enumerate_landscape(inst), std::invalid_argument);
}

TEST_CASE("landscape agrees with brute force on the minimum") {
    for (int i = 1; i <= 3; ++i) {
        const FamilyInstance fam = gen_cycle_chain(i);
        const ProblemInstance inst =
            std::get<ProblemInstance>(build_generic(fam.q1, fam.q2));
        const LandscapeReport report = enumerate_landscape(inst);
        const BruteForceResult res = brute_force_min(inst);
        CHECK(report.neg_histogram.begin()->first == res.min_value);
        CHECK(report.neg_histogram.begin()->second ==
              static_cast<long long>(res.argmins.size()));
    }
}

TEST_CASE("landscape json contains exact fraction strings") {
    const LandscapeReport report = family_landscape(Family::CycleChain, 1);
    const std::string json = landscape_to_json(report);
    CHECK(json.find("\"7/16\"") != std::string::npos);
    CHECK(json.find("strict_local_minima") != std::string::npos);
}

TEST_SUITE_END();
