#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqc/cq.hpp"
#include "cqc/poly.hpp"

namespace cqc {

/// Why a query pair was rejected before (or during) polynomial construction.
/// The first four mirror the preparation checks, the last two the two
/// rejection branches of the simplification pass.
enum class RejectReason {
    AnswerArity,
    AnswerConstantMismatch,
    AnswerVariableConflict,
    EmptyRelation,
    SimplificationNoFit,
    SimplificationConflict,
};

std::string to_string(RejectReason r);

struct EarlyReject {
    RejectReason reason;
    std::string relation;          // for EmptyRelation / Simplification*
    std::optional<Tuple> tuple;    // offending q2 tuple, when applicable
    std::string detail;

    std::string describe() const;
};

/// One row of the extended bit-matrix: an element of A2. Free rows carry
/// binary variables; fixed rows carry a 0-1 vector over the columns (at most
/// one 1; all-zero when a q2-constant does not occur in A1).
struct LayoutRow {
    Term term;
    bool free = true;
    std::vector<std::uint8_t> fixed_bits;  // empty iff free
};

/// Bit-matrix layout: rows are the sorted elements of A2, columns the sorted
/// elements of A1 (variables before constants, byte-wise lexicographic).
/// Variable ids are assigned row-major over the free rows.
struct Layout {
    std::vector<Term> columns;
    std::vector<LayoutRow> rows;
    std::vector<int> free_rows;  // indices into `rows`, in row order

    int num_columns() const { return static_cast<int>(columns.size()); }
    int num_free_rows() const { return static_cast<int>(free_rows.size()); }
    int num_vars() const { return num_free_rows() * num_columns(); }

    VarId var_id(int free_pos, int col) const {
        return static_cast<VarId>(free_pos * num_columns() + col);
    }
    std::optional<int> column_of(const Term& t) const;
    std::optional<int> row_of(const Term& t) const;
    /// Position of row index within free_rows, -1 if the row is fixed.
    int free_position(int row_index) const;

    void rebuild_free_rows();
};

enum class Variant { Generic, Simplified };
enum class PenaltyRule { TableauProduct, PerRelationSum };

std::string to_string(Variant v);

/// The reduction target (p, d, C): polynomial, target minimum -|T2|, and
/// search-space descriptor. `groups` present = one-hot-per-row constraint C^c;
/// absent = unconstrained. `ac_part` is the penalty-free part of p, used when
/// switching to the constrained variant.
struct ProblemInstance {
    BinaryPolynomial p;
    long long d = 0;
    std::optional<std::vector<std::vector<VarId>>> groups;
    Layout layout;
    Variant variant = Variant::Generic;
    BinaryPolynomial ac_part;
    long long penalty_weight = 0;

    bool constrained() const { return groups.has_value(); }
    /// Number of feasible assignments (2^n or prod of group sizes).
    double search_space_size() const;
};

using PrepareResult = std::variant<Layout, EarlyReject>;
using InstanceResult = std::variant<ProblemInstance, EarlyReject>;

/// Preparation step: checks the four trivial containment violations in order
/// (answer arity, answer constant, answer variable conflict, empty relation)
/// and reports the first one found; otherwise builds the extended bit-matrix
/// layout with rows for Adom(q2) and answer variables already fixed.
PrepareResult prepare(const Query& q1, const Query& q2);

/// sum over free rows i of sum_{j<j'} x_{i,j} x_{i,j'}; zero iff every free
/// row has at most one 1.
BinaryPolynomial build_p_unique(const Layout& layout);

/// sum over R, u in T2(R), w in T1(R) of -prod_k x^(e)_{u_k,w_k}, with fixed
/// entries substituted (a fixed 0 drops the product, a fixed 1 is elided).
BinaryPolynomial build_p_ac(const Layout& layout, const Query& q1, const Query& q2);

long long penalty_weight(const Query& q1, const Query& q2, PenaltyRule rule);

InstanceResult build_generic(const Query& q1, const Query& q2,
                             PenaltyRule rule = PenaltyRule::TableauProduct);

/// Simplification pass per the workflow: for every (R, u) with exactly one
/// fitting q1 tuple, fix the rows of u; reject when no tuple fits or a fixing
/// conflicts. Zero contribution is judged against the rows fixed at the start
/// of the pass; conflicts against the evolving state. With `fixpoint`, passes
/// repeat until no row changes.
PrepareResult simplify(const Layout& layout, const Query& q1, const Query& q2,
                       bool fixpoint = false);

InstanceResult build_simplified(const Query& q1, const Query& q2,
                                PenaltyRule rule = PenaltyRule::TableauProduct,
                                bool fixpoint = false);

/// Switches to the constrained variant: drops the penalty term (p becomes the
/// p_ac part) and installs one one-hot group per free row.
ProblemInstance apply_constraints(ProblemInstance inst);

struct TrivialOutcome {
    bool contained = false;
    long long value = 0;
    std::optional<Mapping> witness;  // present iff contained
};

/// When p is a constant l: containment holds iff l == d, and the witness can
/// be read off the fixed rows. Returns nullopt for non-constant p.
std::optional<TrivialOutcome> detect_trivial(const ProblemInstance& inst);

/// Decodes an assignment of the free variables into a mapping A2 -> A1 by
/// merging fixed rows; throws WitnessError unless every row has exactly one 1.
Mapping extract_witness(const std::vector<std::uint8_t>& x, const Layout& layout);

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

}  // namespace cqc
