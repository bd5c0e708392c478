#include "cqc/workflow.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <json.hpp>

#include "cqc/rng.hpp"

namespace cqc {

std::string to_string(SolverKind s) {
    switch (s) {
        case SolverKind::Sa: return "sa";
        case SolverKind::Qaoa: return "qaoa";
        case SolverKind::Brute: return "brute";
        case SolverKind::QaEmulate: return "qa-emulate";
    }
    return "?";
}

SolverKind solver_from_string(const std::string& s) {
    if (s == "sa") return SolverKind::Sa;
    if (s == "qaoa") return SolverKind::Qaoa;
    if (s == "brute") return SolverKind::Brute;
    if (s == "qa-emulate") return SolverKind::QaEmulate;
    throw Error("unknown solver: " + s + " (expected sa, qaoa, brute or qa-emulate)");
}

Verdict Verdict::contained(Mapping witness, const Query& q1, const Query& q2,
                           Source source) {
    if (!is_homomorphism(witness, q2, q1))
        throw Error("internal: candidate witness failed homomorphism verification");
    Verdict v;
    v.kind = Kind::Contained;
    v.source = source;
    v.witness = std::move(witness);
    return v;
}

Verdict Verdict::not_contained(EarlyReject reject) {
    Verdict v;
    v.kind = Kind::NotContained;
    v.reason = to_string(reject.reason);
    v.reject = std::move(reject);
    return v;
}

Verdict Verdict::not_contained(std::string reason) {
    Verdict v;
    v.kind = Kind::NotContained;
    v.reason = std::move(reason);
    return v;
}

Verdict Verdict::undetermined(long long best_energy, long long d) {
    Verdict v;
    v.kind = Kind::Undetermined;
    v.best_energy = best_energy;
    v.d = d;
    return v;
}

int Verdict::exit_code() const {
    switch (kind) {
        case Kind::Contained: return 0;
        case Kind::NotContained: return 1;
        case Kind::Undetermined: return 2;
    }
    return 3;
}

namespace {

InstanceResult build_instance(const Query& q1, const Query& q2, const RunConfig& cfg) {
    if (cfg.variant == Variant::Generic)
        return build_generic(q1, q2, cfg.penalty);
    return build_simplified(q1, q2, cfg.penalty, cfg.simplify_fixpoint);
}

/// Extracts and verifies the first witness among minimum-energy samples.
std::optional<Verdict> first_verified_witness(const std::vector<std::vector<std::uint8_t>>& hits,
                                              const ProblemInstance& inst, const Query& q1,
                                              const Query& q2, Verdict::Source source) {
    for (const auto& bits : hits) {
        try {
            Mapping h = extract_witness(bits, inst.layout);
            if (is_homomorphism(h, q2, q1))
                return Verdict::contained(std::move(h), q1, q2, source);
        } catch (const WitnessError&) {
            // not a function; keep looking
        }
    }
    return std::nullopt;
}

}  // namespace

DecideOutcome decide_pair(const Query& q1, const Query& q2, const RunConfig& cfg) {
    DecideOutcome out;

    // Stage 1: preprocessing.
    InstanceResult built = build_instance(q1, q2, cfg);
    if (auto* reject = std::get_if<EarlyReject>(&built)) {
        out.verdict = Verdict::not_contained(*reject);
        out.solver_used = "preprocess";
        return out;
    }
    ProblemInstance inst = std::get<ProblemInstance>(std::move(built));

    SolverKind solver = cfg.solver;
    if (solver == SolverKind::QaEmulate && cfg.effective_constrained(solver))
        throw Error("qa-emulate solves unconstrained instances only");
    if (cfg.effective_constrained(solver)) inst = apply_constraints(std::move(inst));

    // Degree-based routing happens after simplification (and after the
    // penalty term is dropped in the constrained case).
    const int degree = inst.p.degree();
    if ((solver == SolverKind::Sa || solver == SolverKind::QaEmulate) && degree > 2) {
        if (cfg.no_fallback)
            throw Error("polynomial degree " + std::to_string(degree) +
                        " is not annealer-compatible and fallback is disabled");
        solver = SolverKind::Qaoa;
        if (cfg.effective_constrained(solver) && !inst.constrained())
            inst = apply_constraints(std::move(inst));
    }

    out.num_vars = inst.p.num_vars();
    out.degree = degree;
    out.d = inst.d;
    out.constrained = inst.constrained();

    if (auto trivial = detect_trivial(inst)) {
        out.solver_used = "trivial";
        if (trivial->contained)
            out.verdict = Verdict::contained(std::move(*trivial->witness), q1, q2,
                                             Verdict::Source::Trivial);
        else
            out.verdict = Verdict::not_contained("trivial-constant");
        return out;
    }

    // Stage 2: solve; stage 3: decode and verify.
    out.solver_used = to_string(solver);
    if (solver == SolverKind::Brute) {
        const BruteForceResult res = brute_force_min(inst, cfg.brute_cap);
        if (res.min_value == inst.d) {
            auto verdict = first_verified_witness(res.argmins, inst, q1, q2,
                                                  Verdict::Source::BruteForce);
            if (verdict) {
                out.verdict = std::move(*verdict);
                return out;
            }
            throw Error("internal: minimum reached d but no argmin decoded to a witness");
        }
        out.verdict = Verdict::not_contained("exhaustive-search");
        return out;
    }

    SampleSet samples;
    if (solver == SolverKind::Sa) {
        AnnealConfig anneal = cfg.anneal;
        anneal.seed = cfg.seed;
        samples = simulated_anneal(inst, anneal);
    } else if (solver == SolverKind::QaEmulate) {
        AnnealConfig anneal = cfg.anneal;
        anneal.seed = cfg.seed;
        samples = quantum_anneal_emulate(inst, anneal);
    } else {
        QaoaConfig qaoa = cfg.qaoa;
        qaoa.seed = cfg.seed;
        samples = qaoa_statevector(inst, qaoa).samples;
    }
    out.solution_prob = solution_probability(samples, inst.d);

    std::vector<std::vector<std::uint8_t>> hits;
    for (const SampleEntry& e : samples.entries)
        if (e.energy == inst.d) hits.push_back(e.bits);
    if (auto verdict =
            first_verified_witness(hits, inst, q1, q2, Verdict::Source::Solver)) {
        out.verdict = std::move(*verdict);
        return out;
    }
    out.verdict = Verdict::undetermined(samples.best_energy(), inst.d);
    return out;
}

std::string verdict_to_json(const DecideOutcome& outcome) {
    nlohmann::json j;
    const Verdict& v = outcome.verdict;
    switch (v.kind) {
        case Verdict::Kind::Contained: {
            j["verdict"] = "contained";
            j["source"] = v.source == Verdict::Source::Trivial      ? "trivial"
                          : v.source == Verdict::Source::BruteForce ? "brute-force"
                                                                    : "solver";
            nlohmann::json witness = nlohmann::json::object();
            for (const auto& [from, to] : v.witness->assignments)
                witness[to_string(from)] = to_string(to);
            j["witness"] = witness;
            break;
        }
        case Verdict::Kind::NotContained:
            j["verdict"] = "not-contained";
            j["reason"] = v.reason;
            if (v.reject) j["detail"] = v.reject->describe();
            break;
        case Verdict::Kind::Undetermined:
            j["verdict"] = "undetermined";
            j["best_energy"] = *v.best_energy;
            j["d"] = *v.d;
            break;
    }
    j["solver"] = outcome.solver_used;
    j["num_vars"] = outcome.num_vars;
    j["degree"] = outcome.degree;
    j["exit_code"] = v.exit_code();
    return j.dump(2);
}

Mapping witness_from_json(const std::string& text, const Query& q2) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("witness")) j = j.at("witness");
    Mapping h;
    for (auto it = j.begin(); it != j.end(); ++it)
        h.assignments.emplace(term_from_string(it.key()),
                              term_from_string(it.value().get<std::string>()));
    for (const Term& c : q2.active_domain())
        h.assignments.emplace(c, c);  // constants default to identity
    return h;
}

ClassifyResult classify_pairs(const std::vector<std::pair<ClassifyEntry, PairFile>>& entries,
                              const RunConfig& cfg) {
    ClassifyResult result;
    for (std::size_t row = 0; row < entries.size(); ++row) {
        const auto& [entry, pair] = entries[row];
        RunConfig row_cfg = cfg;
        row_cfg.seed = derive_rng(cfg.seed, {0xC1A55, row}).next_u64();
        std::string outcome;
        try {
            const DecideOutcome decided = decide_pair(pair.q1, pair.q2, row_cfg);
            switch (decided.verdict.kind) {
                case Verdict::Kind::Contained:
                    outcome = entry.positive_label ? "tp" : "fp";
                    break;
                case Verdict::Kind::NotContained:
                    outcome = entry.positive_label ? "fn" : "tn";
                    break;
                case Verdict::Kind::Undetermined:
                    outcome = entry.positive_label ? "fn" : "tn";
                    break;
            }
        } catch (const Error&) {
            outcome = "bot";
        }
        if (outcome == "tp") ++result.counts.tp;
        else if (outcome == "fp") ++result.counts.fp;
        else if (outcome == "fn") ++result.counts.fn;
        else if (outcome == "tn") ++result.counts.tn;
        else ++result.counts.bot;
        result.rows.push_back({entry.name, outcome});
    }
    return result;
}

std::vector<BenchRow> bench_family(Family family, int i_from, int i_to,
                                   const RunConfig& cfg) {
    std::vector<BenchRow> rows;
    for (int i = i_from; i <= i_to; ++i) {
        const auto start = std::chrono::steady_clock::now();
        BenchRow row;
        row.i = i;
        const FamilyInstance fam = gen_family(family, i);
        RunConfig row_cfg = cfg;
        row_cfg.seed = derive_rng(cfg.seed, {0xBE7C4, static_cast<std::uint64_t>(i)}).next_u64();
        try {
            InstanceResult built = build_instance(fam.q1, fam.q2, row_cfg);
            ProblemInstance inst = std::get<ProblemInstance>(std::move(built));
            if (row_cfg.effective_constrained(row_cfg.solver))
                inst = apply_constraints(std::move(inst));
            row.num_vars = inst.p.num_vars();
            if (row_cfg.solver == SolverKind::Brute) {
                const BruteForceResult res = brute_force_min(inst, row_cfg.brute_cap);
                row.argmin_count =
                    res.min_value == inst.d ? static_cast<long long>(res.argmins.size()) : 0;
            } else {
                SampleSet samples;
                if (row_cfg.solver == SolverKind::Sa) {
                    AnnealConfig anneal = row_cfg.anneal;
                    anneal.seed = row_cfg.seed;
                    samples = simulated_anneal(inst, anneal);
                } else if (row_cfg.solver == SolverKind::QaEmulate) {
                    AnnealConfig anneal = row_cfg.anneal;
                    anneal.seed = row_cfg.seed;
                    samples = quantum_anneal_emulate(inst, anneal);
                } else {
                    QaoaConfig qaoa = row_cfg.qaoa;
                    qaoa.seed = row_cfg.seed;
                    samples = qaoa_statevector(inst, qaoa).samples;
                }
                row.solution_probability = solution_probability(samples, inst.d);
            }
        } catch (const CapExceededError&) {
            row.overflow = true;
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

std::string bench_rows_to_csv(const std::vector<BenchRow>& rows, bool brute) {
    std::ostringstream out;
    out << "i,num_vars," << (brute ? "argmin_count" : "solution_probability")
        << ",wall_seconds\n";
    for (const BenchRow& row : rows) {
        out << row.i << "," << row.num_vars << ",";
        if (row.overflow)
            out << "NA";
        else if (brute)
            out << row.argmin_count;
        else
            out << row.solution_probability;
        out << "," << row.wall_seconds << "\n";
    }
    return out.str();
}

}  // namespace cqc
