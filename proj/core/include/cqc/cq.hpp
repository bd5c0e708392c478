#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqc/errors.hpp"

namespace cqc {

/// A term of a tableau: either a query variable or a constant from the data
/// domain. Variables and constants live in disjoint namespaces; the textual
/// form uses a leading '?' for variables.
struct Term {
    enum class Kind : std::uint8_t { Variable, Constant };

    Kind kind = Kind::Variable;
    std::string text;

    static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
    static Term constant(std::string value) { return {Kind::Constant, std::move(value)}; }

    bool is_variable() const { return kind == Kind::Variable; }
    bool is_constant() const { return kind == Kind::Constant; }

    // Variables order before constants; within a kind, byte-wise on text.
    friend auto operator<=>(const Term&, const Term&) = default;
};

/// Surface syntax: "?name" for a variable, any other string for a constant.
std::string to_string(const Term& t);
Term term_from_string(std::string_view s);

using Tuple = std::vector<Term>;

/// Relation names with their arities.
struct Schema {
    std::map<std::string, int> relations;

    bool operator==(const Schema&) const = default;
    int arity(const std::string& relation) const;
};

/// A tableau conjunctive query: per-relation sets of free tuples plus an
/// answer tuple. Tuples are kept sorted and duplicate-free (set semantics).
/// Construction via `make` validates arities and that every answer variable
/// occurs in the tableau.
struct Query {
    Schema schema;
    std::map<std::string, std::vector<Tuple>> tableau;  // every relation present
    Tuple answer;

    static Query make(Schema schema, std::map<std::string, std::vector<Tuple>> tableau,
                      Tuple answer);

    const std::vector<Tuple>& tuples(const std::string& relation) const;

    /// Total number of tableau tuples, |T|.
    long long tableau_size() const;

    /// Variables occurring in the tableau.
    std::set<Term> variables() const;
    /// Active domain: constants of the tableau and the answer tuple.
    std::set<Term> active_domain() const;
    /// Vars(q) ∪ Adom(q), the homomorphism domain/codomain universe.
    std::vector<Term> universe() const;

    bool operator==(const Query&) const = default;
};

/// Finite relations over constants only.
struct DatabaseInstance {
    Schema schema;
    std::map<std::string, std::vector<Tuple>> relations;

    static DatabaseInstance make(Schema schema,
                                 std::map<std::string, std::vector<Tuple>> relations);
    const std::vector<Tuple>& tuples(const std::string& relation) const;
};

/// A candidate homomorphism: a total map on Vars(q2) ∪ Adom(q2).
struct Mapping {
    std::map<Term, Term> assignments;

    const Term& image(const Term& t) const;
    bool operator==(const Mapping&) const = default;
};

/// Query pair file parsed from JSON. `label`/`family` are optional metadata
/// used by the corpus tools.
struct PairFile {
    Query q1;
    Query q2;
    std::optional<std::string> label;                       // "positive" / "negative"
    std::optional<std::pair<std::string, int>> family;      // generator provenance
};

PairFile parse_pair_file(std::string_view text);

/// Parses the two queries of a pair file; both share one schema.
std::pair<Query, Query> parse_query_pair(std::string_view text);

std::string pair_file_to_json(const PairFile& pf);

DatabaseInstance parse_database(std::string_view text);

/// True iff h maps every constant to itself, the answer tuple of q2 onto the
/// answer tuple of q1 componentwise, and every tableau tuple of q2 into the
/// corresponding relation of q1. h must be total on Vars(q2) ∪ Adom(q2).
bool is_homomorphism(const Mapping& h, const Query& q2, const Query& q1);

/// Exhaustive search for a homomorphism from q2 to q1, deterministic: the
/// candidate enumeration is lexicographic by (sorted A2 element, sorted A1
/// element). Throws CapExceededError ("oracle overflow") when |A1|^|A2|
/// exceeds `candidate_cap`.
std::optional<Mapping> find_homomorphism(const Query& q2, const Query& q1,
                                         double candidate_cap = 1e8);

/// Set-semantics query result: images of the answer tuple under all
/// embeddings of q into db.
std::set<Tuple> evaluate_query(const Query& q, const DatabaseInstance& db);

/// q1 ⊑ q2 iff a homomorphism from q2 to q1 exists (Chandra–Merlin).
bool decide_containment_oracle(const Query& q1, const Query& q2,
                               double candidate_cap = 1e8);

}  // namespace cqc
