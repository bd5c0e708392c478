#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cqc/families.hpp"
#include "cqc/workflow.hpp"
#include "test_support.hpp"

using namespace cqc;
using namespace testsupport;

TEST_SUITE_BEGIN("workflow");

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CQC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("decide settles the movie pair trivially") {
    RunConfig cfg;
    const DecideOutcome out = decide_pair(movie_q1(), movie_q2(), cfg);
    CHECK(out.verdict.kind == Verdict::Kind::Contained);
    CHECK(out.verdict.source == Verdict::Source::Trivial);
    CHECK(out.solver_used == "trivial");
    CHECK(out.d == -2);
    REQUIRE(out.verdict.witness.has_value());
    CHECK(out.verdict.witness->image(Term::variable("w2")) == Term::constant("actor"));
    CHECK(out.verdict.exit_code() == 0);
}

TEST_CASE("decide rejects the reversed movie pair at preparation") {
    RunConfig cfg;
    const DecideOutcome out = decide_pair(movie_q2(), movie_q1(), cfg);
    CHECK(out.verdict.kind == Verdict::Kind::NotContained);
    REQUIRE(out.verdict.reject.has_value());
    CHECK(out.verdict.reject->reason == RejectReason::EmptyRelation);
    CHECK(out.verdict.exit_code() == 1);
}

TEST_CASE("brute solver decides the chain family with a ground-truth witness") {
    const FamilyInstance fam = gen_cycle_chain(2);
    RunConfig cfg;
    cfg.solver = SolverKind::Brute;
    const DecideOutcome out = decide_pair(fam.q1, fam.q2, cfg);
    CHECK(out.verdict.kind == Verdict::Kind::Contained);
    CHECK(out.verdict.source == Verdict::Source::BruteForce);
    REQUIRE(out.verdict.witness.has_value());
    CHECK(is_homomorphism(*out.verdict.witness, fam.q2, fam.q1));

    // the witness is the decoding of one of the two ground-truth bitvectors
    const ProblemInstance inst = std::get<ProblemInstance>(build_generic(fam.q1, fam.q2));
    const Mapping h1 = extract_witness(fam.ground_truth[0], inst.layout);
    const Mapping h2 = extract_witness(fam.ground_truth[1], inst.layout);
    CHECK((*out.verdict.witness == h1 || *out.verdict.witness == h2));
}

TEST_CASE("brute solver proves non-containment exhaustively") {
    // 3-cycle does not map into a 2-cycle, and no preparation case fires
    const Term a = Term::variable("a"), b = Term::variable("b"), c = Term::variable("c");
    const Query three_cycle =
        Query::make(Schema{{{"E", 2}}}, {{"E", {{a, b}, {b, c}, {c, a}}}}, {});
    RunConfig cfg;
    cfg.solver = SolverKind::Brute;
    const DecideOutcome out = decide_pair(two_cycle_query(), three_cycle, cfg);
    CHECK(out.verdict.kind == Verdict::Kind::NotContained);
    CHECK(out.verdict.reason == "exhaustive-search");
}

TEST_CASE("sa solver certifies the chain family") {
    const FamilyInstance fam = gen_cycle_chain(2);
    RunConfig cfg;
    cfg.seed = 4;
    const DecideOutcome out = decide_pair(fam.q1, fam.q2, cfg);
    CHECK(out.verdict.kind == Verdict::Kind::Contained);
    CHECK(out.solver_used == "sa");
    CHECK(out.solution_prob > 0.0);
}

TEST_CASE("heuristic non-discovery yields undetermined, not a negative") {
    // d is unreachable only via exhaustive search; with a tiny heuristic
    // budget SA may miss the optimum, which must read as Undetermined.
    const FamilyInstance fam = gen_cycle_chain(6);
    RunConfig cfg;
    cfg.seed = 1;
    cfg.anneal.num_reads = 2;
    cfg.anneal.num_sweeps = 1;
    const DecideOutcome out = decide_pair(fam.q1, fam.q2, cfg);
    if (out.verdict.kind != Verdict::Kind::Contained) {
        CHECK(out.verdict.kind == Verdict::Kind::Undetermined);
        REQUIRE(out.verdict.best_energy.has_value());
        CHECK(*out.verdict.best_energy > -6);
        CHECK(out.verdict.exit_code() == 2);
    }
}

TEST_CASE("degree routing falls back to qaoa") {
    // ternary relation gives a degree-3 p_ac; SA must hand over to QAOA
    const Schema s{{{"T", 3}}};
    const Term x = Term::variable("x"), y = Term::variable("y"), z = Term::variable("z");
    const Term u = Term::variable("u"), v = Term::variable("v"), w = Term::variable("w");
    const Query q1 = Query::make(s, {{"T", {{x, y, z}, {y, z, x}}}}, {});
    const Query q2 = Query::make(s, {{"T", {{u, v, w}}}}, {});
    RunConfig cfg;
    cfg.solver = SolverKind::Sa;
    cfg.seed = 2;
    cfg.qaoa.shots = 200;
    cfg.qaoa.iterations = 10;
    const DecideOutcome out = decide_pair(q1, q2, cfg);
    CHECK(out.solver_used == "qaoa");
    CHECK(out.constrained);  // fallback adopts QAOA's default
    CHECK(out.verdict.kind == Verdict::Kind::Contained);

    cfg.no_fallback = true;
    CHECK_THROWS_AS(decide_pair(q1, q2, cfg), Error);
}

TEST_CASE("qa-emulate solves small quadratic instances end to end") {
    const FamilyInstance fam = gen_cycle_chain(1);
    RunConfig cfg;
    cfg.solver = SolverKind::QaEmulate;
    cfg.seed = 6;
    const DecideOutcome out = decide_pair(fam.q1, fam.q2, cfg);
    CHECK(out.verdict.kind == Verdict::Kind::Contained);
}

TEST_CASE("contained verdicts cannot carry bad witnesses") {
    Mapping junk;
    junk.assignments[Term::variable("x2")] = Term::variable("x1");
    CHECK_THROWS_AS(Verdict::contained(junk, movie_q1(), movie_q2(), Verdict::Source::Solver),
                    std::exception);
}

TEST_CASE("classification over a small corpus with the brute solver") {
    // both families for i <= 4 as positives, plus 10 reversed pairs as negatives
    std::vector<std::pair<ClassifyEntry, PairFile>> entries;
    for (int i = 1; i <= 4; ++i) {
        for (const Family f : {Family::CycleChain, Family::ChainStar}) {
            const FamilyInstance fam = gen_family(f, i);
            entries.push_back({{to_string(f) + "-" + std::to_string(i), true},
                               {fam.q1, fam.q2, "positive", std::nullopt}});
        }
    }
    for (int i = 1; i <= 5; ++i) {
        for (const Family f : {Family::CycleChain, Family::ChainStar}) {
            const FamilyInstance fam = gen_family(f, i);
            entries.push_back({{to_string(f) + "-" + std::to_string(i) + "-rev", false},
                               {fam.q2, fam.q1, "negative", std::nullopt}});
        }
    }
    RunConfig cfg;
    cfg.solver = SolverKind::Brute;
    const ClassifyResult res = classify_pairs(entries, cfg);
    CHECK(res.counts.tp == 8);
    CHECK(res.counts.tn == 10);
    CHECK(res.counts.fp == 0);
    CHECK(res.counts.fn == 0);
    CHECK(res.counts.bot == 0);

    RunConfig sa_cfg;
    sa_cfg.seed = 99;
    sa_cfg.anneal.num_reads = 100;
    const ClassifyResult sa_res = classify_pairs(entries, sa_cfg);
    CHECK(sa_res.counts.fp == 0);  // false positives are structurally impossible
    CHECK(sa_res.counts.tn == 10);

    const ClassifyResult empty_res = classify_pairs({}, cfg);
    CHECK(empty_res.counts.total() == 0);
}

TEST_CASE("bench rows report family size and probability") {
    RunConfig cfg;
    cfg.seed = 13;
    cfg.anneal.num_reads = 100;
    const auto rows = bench_family(Family::ChainStar, 2, 4, cfg);
    REQUIRE(rows.size() == 3);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].i == static_cast<int>(k) + 2);
        CHECK(rows[k].num_vars == 3 * (rows[k].i + 1));
        CHECK(rows[k].solution_probability > 0.0);
    }
    const std::string csv = bench_rows_to_csv(rows, false);
    CHECK(csv.rfind("i,num_vars,solution_probability,wall_seconds\n", 0) == 0);

    RunConfig brute_cfg;
    brute_cfg.solver = SolverKind::Brute;
    const auto brute_rows = bench_family(Family::CycleChain, 1, 2, brute_cfg);
    CHECK(brute_rows[0].argmin_count == 2);
    CHECK(brute_rows[1].argmin_count == 2);
    CHECK(bench_rows_to_csv(brute_rows, true).rfind("i,num_vars,argmin_count", 0) == 0);
}

TEST_CASE("chain-family solution probability trends downward") {
    RunConfig cfg;
    cfg.seed = 7;
    const auto rows = bench_family(Family::CycleChain, 1, 6, cfg);
    // weak trend: the smallest instance is at least as solvable as the largest
    CHECK(rows.front().solution_probability >= rows.back().solution_probability);
    CHECK(rows.back().solution_probability < 1.0);
    for (const BenchRow& row : rows) CHECK(row.solution_probability > 0.0);
}

TEST_CASE("decide output is identical across runs") {
    const FamilyInstance fam = gen_cycle_chain(2);
    RunConfig cfg;
    cfg.seed = 31;
    const DecideOutcome a = decide_pair(fam.q1, fam.q2, cfg);
    const DecideOutcome b = decide_pair(fam.q1, fam.q2, cfg);
    CHECK(verdict_to_json(a) == verdict_to_json(b));
}

TEST_CASE("witness json round trip through verdict output") {
    RunConfig cfg;
    const DecideOutcome out = decide_pair(movie_q1(), movie_q2(), cfg);
    const std::string json = verdict_to_json(out);
    const Mapping h = witness_from_json(json, movie_q2());
    CHECK(is_homomorphism(h, movie_q2(), movie_q1()));
}

TEST_CASE("cli: decide exit codes") {
    const std::string movie = data_path("movie_pair.json");
    CHECK(run_cli("decide " + movie) == 0);

    // reversed pair: write a temp file with q1/q2 swapped
    const auto tmp = std::filesystem::temp_directory_path() / "cqc_reversed_pair.json";
    {
        PairFile pf{movie_q2(), movie_q1(), "negative", std::nullopt};
        std::ofstream(tmp) << pair_file_to_json(pf);
    }
    CHECK(run_cli("decide " + tmp.string()) == 1);
    CHECK(run_cli("decide /nonexistent.json") == 3);
    std::filesystem::remove(tmp);
}

TEST_CASE("cli: verify accepts the decide witness") {
    const std::string movie = data_path("movie_pair.json");
    const auto witness = std::filesystem::temp_directory_path() / "cqc_witness.json";
    CHECK(run_cli("decide " + movie + " --out " + witness.string()) == 0);
    CHECK(run_cli("verify " + movie + " " + witness.string()) == 0);

    // corrupt the witness: send w2 to x1
    {
        std::ofstream(witness) << R"({"?x2":"?x1","?y2":"?y1","?z2":"?z1","?w2":"?x1"})";
    }
    CHECK(run_cli("verify " + movie + " " + witness.string()) == 1);
    std::filesystem::remove(witness);
}

TEST_CASE("cli: reduce emits the constant movie instance") {
    const std::string movie = data_path("movie_pair.json");
    const auto out = std::filesystem::temp_directory_path() / "cqc_movie_instance.json";
    CHECK(run_cli("reduce " + movie + " --out " + out.string()) == 0);
    const ProblemInstance inst = instance_from_json(read_file(out.string()));
    CHECK(inst.p.num_vars() == 0);
    CHECK(inst.p.constant_term() == -2);
    CHECK(inst.d == -2);
    std::filesystem::remove(out);
}

TEST_CASE("cli: generate round trips a family pair") {
    const auto out = std::filesystem::temp_directory_path() / "cqc_star3.json";
    CHECK(run_cli("generate --family chain-star -i 3 --out " + out.string()) == 0);
    const PairFile pf = parse_pair_file(read_file(out.string()));
    const FamilyInstance fam = gen_chain_star(3);
    CHECK(pf.q1 == fam.q1);
    CHECK(pf.q2 == fam.q2);
    CHECK(pf.label == "positive");
    REQUIRE(pf.family.has_value());
    CHECK(pf.family->first == "chain-star");
    CHECK(pf.family->second == 3);
    std::filesystem::remove(out);
}

TEST_CASE("cli: QCP_SEED env var is the seed fallback") {
    namespace fs = std::filesystem;
    const auto inst = fs::temp_directory_path() / "cqc_seed_inst.json";
    const auto by_flag = fs::temp_directory_path() / "cqc_by_flag.csv";
    const auto by_env = fs::temp_directory_path() / "cqc_by_env.csv";
    const auto other = fs::temp_directory_path() / "cqc_other_seed.csv";

    CHECK(run_cli("reduce " + data_path("movie_pair.json") + " --variant generic --out " +
                  inst.string()) == 0);
    const std::string solve =
        std::string(CQC_CLI_PATH) + " solve " + inst.string() + " --reads 30 --sweeps 50";
    CHECK(WEXITSTATUS(std::system(
              (solve + " --seed 5 --out " + by_flag.string() + " >/dev/null 2>&1").c_str())) == 0);
    CHECK(WEXITSTATUS(std::system(("QCP_SEED=5 " + solve + " --out " + by_env.string() +
                                   " >/dev/null 2>&1").c_str())) == 0);
    CHECK(WEXITSTATUS(std::system(
              (solve + " --seed 6 --out " + other.string() + " >/dev/null 2>&1").c_str())) == 0);

    CHECK(read_file(by_flag.string()) == read_file(by_env.string()));
    CHECK(read_file(by_flag.string()) != read_file(other.string()));
    for (const auto& p : {inst, by_flag, by_env, other}) {
        fs::remove(p);
        fs::remove(fs::path(p.string() + ".meta.json"));
    }
}

TEST_CASE("cli: landscape and bench run end to end") {
    CHECK(run_cli("landscape --family cycle-chain -i 1") == 0);
    CHECK(run_cli("bench --family cycle-chain --i-from 1 --i-to 2 --reads 50 --seed 3") == 0);
    CHECK(run_cli("classify /nonexistent-dir") == 3);
}

TEST_SUITE_END();
