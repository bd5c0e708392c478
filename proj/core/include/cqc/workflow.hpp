#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqc/cq.hpp"
#include "cqc/families.hpp"
#include "cqc/reduce.hpp"
#include "cqc/solve.hpp"

namespace cqc {

enum class SolverKind { Sa, Qaoa, Brute, QaEmulate };

std::string to_string(SolverKind s);
SolverKind solver_from_string(const std::string& s);

/// End-to-end run configuration. `constrained` left unset defaults to the
/// solver's natural choice (on for QAOA, off otherwise).
struct RunConfig {
    Variant variant = Variant::Simplified;
    std::optional<bool> constrained;
    SolverKind solver = SolverKind::Sa;
    PenaltyRule penalty = PenaltyRule::TableauProduct;
    bool no_fallback = false;  // degree > 2 becomes an error instead of QAOA
    bool simplify_fixpoint = false;
    std::uint64_t seed = 0;
    AnnealConfig anneal;
    QaoaConfig qaoa;
    double brute_cap = 16777216.0;

    bool effective_constrained(SolverKind s) const {
        return constrained.value_or(s == SolverKind::Qaoa);
    }
};

/// The workflow's answer. Contained verdicts always carry a witness that was
/// verified by is_homomorphism at construction, so a false positive cannot be
/// represented. NotContained is definitive (an early reject, a constant
/// polynomial above d, or an exhausted search space); heuristic solvers that
/// fail to reach d yield Undetermined.
struct Verdict {
    enum class Kind { Contained, NotContained, Undetermined };
    enum class Source { Trivial, Solver, BruteForce };

    Kind kind = Kind::Undetermined;
    Source source = Source::Solver;              // Contained only
    std::optional<Mapping> witness;              // Contained only
    std::optional<EarlyReject> reject;           // NotContained via preprocessing
    std::string reason;                          // NotContained: short machine tag
    std::optional<long long> best_energy;        // Undetermined
    std::optional<long long> d;

    static Verdict contained(Mapping witness, const Query& q1, const Query& q2,
                             Source source);
    static Verdict not_contained(EarlyReject reject);
    static Verdict not_contained(std::string reason);
    static Verdict undetermined(long long best_energy, long long d);

    /// 0 contained, 1 not contained, 2 undetermined.
    int exit_code() const;
};

struct DecideOutcome {
    Verdict verdict;
    std::string solver_used;   // "trivial" when settled during preprocessing
    long long num_vars = 0;
    int degree = 0;
    long long d = 0;
    bool constrained = false;
    double solution_prob = 0.0;  // heuristic solvers only
};

DecideOutcome decide_pair(const Query& q1, const Query& q2, const RunConfig& cfg);

std::string verdict_to_json(const DecideOutcome& outcome);

/// Witness file: a JSON object mapping q2-side terms to q1-side terms
/// ("?x2" -> "?x1"). A full decide output file is accepted as well (its
/// "witness" field is used). Constants may be omitted; they map to themselves.
Mapping witness_from_json(const std::string& text, const Query& q2);

struct ClassifyCounts {
    long long tp = 0, fp = 0, fn = 0, tn = 0, bot = 0;
    long long total() const { return tp + fp + fn + tn + bot; }
};

struct ClassifyEntry {
    std::string name;
    bool positive_label = false;
};

struct ClassifyRow {
    std::string name;
    std::string outcome;  // "tp", "fn", "tn", "bot", ...
};

struct ClassifyResult {
    ClassifyCounts counts;
    std::vector<ClassifyRow> rows;
};

/// Runs the decide workflow on labeled pairs; per-entry seeds derive from
/// (cfg.seed, entry index). Solver errors (caps, no-fallback routing) count
/// as bot.
ClassifyResult classify_pairs(const std::vector<std::pair<ClassifyEntry, PairFile>>& entries,
                              const RunConfig& cfg);

struct BenchRow {
    int i = 0;
    long long num_vars = 0;
    bool overflow = false;          // cap exceeded: probability reported as NA
    double solution_probability = 0.0;
    long long argmin_count = -1;    // brute solver only
    double wall_seconds = 0.0;
};

std::vector<BenchRow> bench_family(Family family, int i_from, int i_to,
                                   const RunConfig& cfg);

std::string bench_rows_to_csv(const std::vector<BenchRow>& rows, bool brute);

}  // namespace cqc
