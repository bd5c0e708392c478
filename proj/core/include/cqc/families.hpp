#pragma once

#include <string>
#include <vector>

#include "cqc/cq.hpp"
#include "cqc/poly.hpp"

namespace cqc {

/// The two parameterized query-pair families over the directed-graph schema
/// {E/2}: a 2-cycle contained in an i-chain, and a 2-chain contained in an
/// i-star. Both are Boolean, survive preparation and simplification
/// unchanged, and have exactly two optimal assignments.
enum class Family { CycleChain, ChainStar };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct FamilyInstance {
    Family family;
    int i = 1;
    Query q1;
    Query q2;
    /// The two optimal bitvectors under the canonical layout (row-major,
    /// rows y_0..y_i, columns z_0..z_1(..z_2)).
    std::vector<std::vector<std::uint8_t>> ground_truth;
    int num_vars = 0;            // 2(i+1) or 3(i+1)
    long long penalty_weight = 0;  // 2i+1
    long long d = 0;               // -i
};

FamilyInstance gen_cycle_chain(int i);
FamilyInstance gen_chain_star(int i);
FamilyInstance gen_family(Family f, int i);

/// Closed-form state fractions of the unconstrained energy landscape.
/// All values are exact rationals; the cycle-chain neg fraction uses the
/// integer Pell-type recurrence Q_k = (1+sqrt2)^k + (1-sqrt2)^k with
/// denominator 2*3^(i+1) (the table-consistent form). The irrational-route
/// evaluation of the same quantity is provided for cross-checking.
struct FamilyFractions {
    Rational p_pos;
    Rational p_neg_given_notpos;
    Rational p_zero_given_notpos;
    double p_neg_given_notpos_by_pow = 0.0;
};

FamilyFractions closed_form_fractions(Family f, int i);

/// Probability of staying in an optimum with energy gap `gap` when its zero
/// neighbor is proposed at `time_fraction` of a geometric beta schedule:
/// 1 - exp(-beta_k * gap) with beta_k = beta_start * alpha^k,
/// alpha = (beta_end/beta_start)^(1/steps), k = round(time_fraction * steps).
double escape_probability(double gap, double time_fraction, double beta_start,
                          double beta_end, long long steps);

}  // namespace cqc
