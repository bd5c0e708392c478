#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqc/reduce.hpp"

namespace cqc {

/// Full enumeration of an unconstrained instance's energy landscape: state
/// classification (pos / zero / neg histogram), exact fractions, and strict
/// local minima (every Hamming-1 neighbor strictly greater). Fractions are
/// exact rationals over 2^n.
struct LandscapeReport {
    int num_vars = 0;
    long long pos_count = 0;
    long long zero_count = 0;
    std::map<long long, long long> neg_histogram;  // energy -> count

    Rational p_pos;
    Rational p_neg_given_notpos;
    Rational p_zero_given_notpos;

    std::vector<std::pair<std::vector<std::uint8_t>, long long>> strict_local_minima;
    /// Zero-energy states with at least one negative Hamming-1 neighbor
    /// (plateau connectivity to the optimum basin).
    long long zero_adjacent_to_neg = 0;

    long long neg_count() const;
    long long total_states() const;
};

LandscapeReport enumerate_landscape(const ProblemInstance& inst, int cap_bits = 24);

std::string landscape_to_json(const LandscapeReport& report);

}  // namespace cqc
