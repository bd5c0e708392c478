#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cqc/cq.hpp"
#include "cqc/families.hpp"
#include "cqc/landscape.hpp"
#include "cqc/reduce.hpp"
#include "cqc/solve.hpp"
#include "cqc/workflow.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cqc::Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cqc::Error("cannot write " + path);
    out << content;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content << (content.ends_with('\n') ? "" : "\n");
    else
        write_file(out_path, content);
}

struct CommonOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string variant = "simplified";
    bool constrained = false;
    bool unconstrained = false;
    std::string solver = "sa";
    std::string penalty = "product";
    bool no_fallback = false;
    bool simplify_fixpoint = false;
    std::string out;

    // solver knobs
    long long reads = 500, sweeps = 1000;
    double beta_start = 0.5, beta_end = 10.0;
    std::string schedule = "geometric";
    long long proposals_per_sweep = 0;
    bool sa_greedy = false;
    std::string sa_start;
    double anneal_time = 30.0;
    int layers = 2, iterations = 30;
    long long shots = 500;
    bool sampled_expectation = false;
    double brute_cap = 16777216.0;
    int statevector_cap = 24;

    cqc::RunConfig to_run_config() const {
        cqc::RunConfig cfg;
        cfg.variant = variant == "generic" ? cqc::Variant::Generic : cqc::Variant::Simplified;
        if (constrained) cfg.constrained = true;
        if (unconstrained) cfg.constrained = false;
        cfg.solver = cqc::solver_from_string(solver);
        cfg.penalty = penalty == "per-relation" ? cqc::PenaltyRule::PerRelationSum
                                                : cqc::PenaltyRule::TableauProduct;
        cfg.no_fallback = no_fallback;
        cfg.simplify_fixpoint = simplify_fixpoint;
        cfg.seed = effective_seed();
        cfg.anneal.num_reads = reads;
        cfg.anneal.num_sweeps = sweeps;
        cfg.anneal.beta_start = beta_start;
        cfg.anneal.beta_end = beta_end;
        cfg.anneal.schedule = schedule == "linear" ? cqc::BetaSchedule::Linear
                                                   : cqc::BetaSchedule::Geometric;
        cfg.anneal.proposals_per_sweep = proposals_per_sweep;
        cfg.anneal.greedy = sa_greedy;
        cfg.anneal.anneal_time = anneal_time;
        if (!sa_start.empty()) {
            std::vector<std::uint8_t> bits;
            for (char c : sa_start) bits.push_back(c == '1');
            cfg.anneal.fixed_start = bits;
        }
        cfg.qaoa.layers = layers;
        cfg.qaoa.iterations = iterations;
        cfg.qaoa.shots = shots;
        cfg.qaoa.sampled_expectation = sampled_expectation;
        cfg.qaoa.statevector_cap = statevector_cap;
        cfg.brute_cap = brute_cap;
        return cfg;
    }

    std::uint64_t effective_seed() const {
        if (seed_given) return seed;
        if (const char* env = std::getenv("QCP_SEED")) return std::strtoull(env, nullptr, 10);
        return 0;
    }
};

void add_common_options(CLI::App& app, CommonOptions& opt) {
    app.add_option("--seed", opt.seed, "Random seed (falls back to $QCP_SEED, then 0)")
        ->each([&](const std::string&) { opt.seed_given = true; });
    app.add_option("--variant", opt.variant, "Reduction variant")
        ->check(CLI::IsMember({"generic", "simplified"}))
        ->capture_default_str();
    app.add_flag("--constrained", opt.constrained, "Force the one-hot-per-row search space");
    app.add_flag("--unconstrained", opt.unconstrained, "Force the unconstrained search space");
    app.add_option("--solver", opt.solver, "Preferred solver")
        ->check(CLI::IsMember({"sa", "qaoa", "brute", "qa-emulate"}))
        ->capture_default_str();
    app.add_option("--penalty", opt.penalty, "Penalty weight rule")
        ->check(CLI::IsMember({"product", "per-relation"}))
        ->capture_default_str();
    app.add_flag("--no-fallback", opt.no_fallback,
                 "Fail on degree > 2 instead of falling back to QAOA");
    app.add_flag("--simplify-fixpoint", opt.simplify_fixpoint,
                 "Repeat simplification passes until stable");
    app.add_option("--out", opt.out, "Output file (default: stdout)");

    app.add_option("--reads", opt.reads, "Annealing reads")->capture_default_str();
    app.add_option("--sweeps", opt.sweeps, "Annealing sweeps")->capture_default_str();
    app.add_option("--beta-start", opt.beta_start, "Initial inverse temperature")
        ->capture_default_str();
    app.add_option("--beta-end", opt.beta_end, "Final inverse temperature")
        ->capture_default_str();
    app.add_option("--beta-schedule", opt.schedule, "Beta schedule")
        ->check(CLI::IsMember({"geometric", "linear"}))
        ->capture_default_str();
    app.add_option("--proposals-per-sweep", opt.proposals_per_sweep,
                   "Flip proposals per sweep (0 = one per variable/row)");
    app.add_flag("--sa-greedy", opt.sa_greedy, "Greedy limit: never accept uphill moves");
    app.add_option("--sa-start", opt.sa_start, "Pin every read to this start bitstring");
    app.add_option("--anneal-time", opt.anneal_time,
                   "Total evolution time for qa-emulate")
        ->capture_default_str();
    app.add_option("--layers", opt.layers, "QAOA layers")->capture_default_str();
    app.add_option("--iterations", opt.iterations, "QAOA optimizer evaluation budget")
        ->capture_default_str();
    app.add_option("--shots", opt.shots, "QAOA shots")->capture_default_str();
    app.add_flag("--sampled-expectation", opt.sampled_expectation,
                 "Estimate the QAOA objective from shots instead of the exact statevector");
    app.add_option("--brute-cap", opt.brute_cap, "Brute-force state cap");
    app.add_option("--statevector-cap", opt.statevector_cap, "QAOA statevector qubit cap");
}

cqc::InstanceResult build_from_options(const cqc::Query& q1, const cqc::Query& q2,
                                       const CommonOptions& opt) {
    const cqc::RunConfig cfg = opt.to_run_config();
    cqc::InstanceResult built =
        cfg.variant == cqc::Variant::Generic
            ? cqc::build_generic(q1, q2, cfg.penalty)
            : cqc::build_simplified(q1, q2, cfg.penalty, cfg.simplify_fixpoint);
    if (auto* inst = std::get_if<cqc::ProblemInstance>(&built))
        if (cfg.effective_constrained(cfg.solver))
            *inst = cqc::apply_constraints(std::move(*inst));
    return built;
}

int cmd_decide(const std::string& pair_path, const CommonOptions& opt) {
    const cqc::PairFile pair = cqc::parse_pair_file(read_file(pair_path));
    const cqc::DecideOutcome outcome =
        cqc::decide_pair(pair.q1, pair.q2, opt.to_run_config());
    const std::string json = cqc::verdict_to_json(outcome);
    std::cout << json << "\n";
    if (!opt.out.empty()) write_file(opt.out, json);
    return outcome.verdict.exit_code();
}

int cmd_reduce(const std::string& pair_path, const CommonOptions& opt,
               const std::string& qubo_out) {
    const cqc::PairFile pair = cqc::parse_pair_file(read_file(pair_path));
    cqc::InstanceResult built = build_from_options(pair.q1, pair.q2, opt);
    if (auto* reject = std::get_if<cqc::EarlyReject>(&built)) {
        std::cout << "not contained: " << reject->describe() << "\n";
        return 1;
    }
    const cqc::ProblemInstance& inst = std::get<cqc::ProblemInstance>(built);
    emit(cqc::instance_to_json(inst), opt.out);
    if (!qubo_out.empty()) write_file(qubo_out, cqc::qubo_to_json(cqc::to_qubo(inst.p)));
    std::cerr << "variables: " << inst.p.num_vars() << ", degree: " << inst.p.degree()
              << ", d: " << inst.d << "\n";
    return 0;
}

int cmd_solve(const std::string& instance_path, const CommonOptions& opt) {
    const cqc::ProblemInstance inst = cqc::instance_from_json(read_file(instance_path));
    const cqc::RunConfig cfg = opt.to_run_config();
    if (cfg.solver == cqc::SolverKind::Brute) {
        const cqc::BruteForceResult res = cqc::brute_force_min(inst, cfg.brute_cap);
        std::ostringstream out;
        out << "minimum," << res.min_value << "\nargmins," << res.argmins.size() << "\n";
        for (const auto& bits : res.argmins) {
            for (std::uint8_t b : bits) out << (b ? '1' : '0');
            out << "\n";
        }
        emit(out.str(), opt.out);
        return 0;
    }
    cqc::SampleSet samples;
    if (cfg.solver == cqc::SolverKind::Sa) {
        cqc::AnnealConfig anneal = cfg.anneal;
        anneal.seed = cfg.seed;
        samples = cqc::simulated_anneal(inst, anneal);
    } else if (cfg.solver == cqc::SolverKind::QaEmulate) {
        cqc::AnnealConfig anneal = cfg.anneal;
        anneal.seed = cfg.seed;
        samples = cqc::quantum_anneal_emulate(inst, anneal);
    } else {
        cqc::QaoaConfig qaoa = cfg.qaoa;
        qaoa.seed = cfg.seed;
        samples = cqc::qaoa_statevector(inst, qaoa).samples;
    }
    emit(cqc::sample_set_to_csv(samples), opt.out);
    if (!opt.out.empty())
        write_file(opt.out + ".meta.json", cqc::solver_meta_to_json(samples.meta));
    std::cerr << "best energy: " << samples.best_energy()
              << ", solution probability vs d=" << inst.d << ": "
              << cqc::solution_probability(samples, inst.d) << "\n";
    return 0;
}

int cmd_generate(const std::string& family, int i, const CommonOptions& opt) {
    const cqc::FamilyInstance inst = cqc::gen_family(cqc::family_from_string(family), i);
    cqc::PairFile pf{inst.q1, inst.q2, "positive",
                     std::make_pair(cqc::to_string(inst.family), inst.i)};
    emit(cqc::pair_file_to_json(pf), opt.out);
    return 0;
}

int cmd_landscape(const std::string& pair_path, const std::string& family, int i,
                  const CommonOptions& opt) {
    cqc::PairFile pair;
    std::optional<cqc::Family> fam;
    if (!pair_path.empty()) {
        pair = cqc::parse_pair_file(read_file(pair_path));
        if (pair.family) fam = cqc::family_from_string(pair.family->first);
    } else {
        fam = cqc::family_from_string(family);
        const cqc::FamilyInstance inst = cqc::gen_family(*fam, i);
        pair = {inst.q1, inst.q2, "positive", std::make_pair(family, i)};
    }
    CommonOptions unconstr = opt;
    unconstr.constrained = false;
    unconstr.unconstrained = true;
    unconstr.solver = "brute";
    cqc::InstanceResult built = build_from_options(pair.q1, pair.q2, unconstr);
    if (auto* reject = std::get_if<cqc::EarlyReject>(&built)) {
        std::cout << "not contained: " << reject->describe() << "\n";
        return 1;
    }
    const cqc::LandscapeReport report =
        cqc::enumerate_landscape(std::get<cqc::ProblemInstance>(built));
    nlohmann::json json = nlohmann::json::parse(cqc::landscape_to_json(report));
    if (fam && pair.family) {
        const int fi = pair.family->second;
        const cqc::FamilyFractions cf = cqc::closed_form_fractions(*fam, fi);
        json["closed_form"] = {
            {"p_pos", cqc::rational_to_string(cf.p_pos)},
            {"p_neg_given_notpos", cqc::rational_to_string(cf.p_neg_given_notpos)},
            {"p_zero_given_notpos", cqc::rational_to_string(cf.p_zero_given_notpos)},
        };
        json["escape_stay_probability_at_quarter_time"] =
            cqc::escape_probability(fi, 0.25, 0.5, 10.0, 1000);
        json["notes"] =
            "chain-family neg fraction uses the 2*3^(i+1) denominator; the 2^(i+2) "
            "variant is inconsistent with the enumerated counts";
    }
    emit(json.dump(2), opt.out);
    return 0;
}

int cmd_bench(const std::string& family, int i_from, int i_to, const CommonOptions& opt) {
    const cqc::RunConfig cfg = opt.to_run_config();
    const auto rows = cqc::bench_family(cqc::family_from_string(family), i_from, i_to, cfg);
    emit(cqc::bench_rows_to_csv(rows, cfg.solver == cqc::SolverKind::Brute), opt.out);
    return 0;
}

int cmd_classify(const std::string& dir, const CommonOptions& opt) {
    std::vector<std::pair<cqc::ClassifyEntry, cqc::PairFile>> entries;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& path : files) {
        cqc::PairFile pair = cqc::parse_pair_file(read_file(path.string()));
        if (!pair.label) throw cqc::Error("unlabeled corpus entry: " + path.string());
        entries.push_back(
            {{path.filename().string(), *pair.label == "positive"}, std::move(pair)});
    }
    const cqc::ClassifyResult result = classify_pairs(entries, opt.to_run_config());
    std::cout << "TP\tFP\tFN\tTN\tbot\n"
              << result.counts.tp << "\t" << result.counts.fp << "\t" << result.counts.fn
              << "\t" << result.counts.tn << "\t" << result.counts.bot << "\n";
    if (!opt.out.empty()) {
        std::ostringstream csv;
        csv << "file,outcome\n";
        for (const auto& row : result.rows) csv << row.name << "," << row.outcome << "\n";
        csv << "total,tp=" << result.counts.tp << ";fp=" << result.counts.fp
            << ";fn=" << result.counts.fn << ";tn=" << result.counts.tn
            << ";bot=" << result.counts.bot << "\n";
        write_file(opt.out, csv.str());
    }
    return 0;
}

int cmd_verify(const std::string& pair_path, const std::string& witness_path) {
    const cqc::PairFile pair = cqc::parse_pair_file(read_file(pair_path));
    const cqc::Mapping h = cqc::witness_from_json(read_file(witness_path), pair.q2);
    bool ok = false;
    try {
        ok = cqc::is_homomorphism(h, pair.q2, pair.q1);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    std::cout << (ok ? "witness verified: homomorphism from q2 to q1\n"
                     : "witness rejected: not a homomorphism\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conjunctive-query containment via binary-polynomial minimization"};
    app.require_subcommand(1);
    CommonOptions opt;

    std::string pair_path, instance_path, witness_path, dir_path, family, qubo_out;
    int i_param = 1, i_from = 1, i_to = 1;

    auto* decide = app.add_subcommand("decide", "Decide containment q1 ⊑ q2 for a pair file");
    decide->add_option("pair", pair_path, "Query pair file")->required();
    add_common_options(*decide, opt);

    auto* reduce = app.add_subcommand("reduce", "Reduce a pair to (p, d, C)");
    reduce->add_option("pair", pair_path, "Query pair file")->required();
    reduce->add_option("--qubo", qubo_out, "Also export the QUBO coordinate list");
    add_common_options(*reduce, opt);

    auto* solve = app.add_subcommand("solve", "Minimize a reduced instance file");
    solve->add_option("instance", instance_path, "Reduced instance file")->required();
    add_common_options(*solve, opt);

    auto* generate = app.add_subcommand("generate", "Emit a parameterized family pair file");
    generate->add_option("--family", family, "cycle-chain or chain-star")->required();
    generate->add_option("-i", i_param, "Family parameter (>= 1)")->required();
    add_common_options(*generate, opt);

    auto* landscape = app.add_subcommand("landscape", "Enumerate an energy landscape");
    landscape->add_option("--pair", pair_path, "Query pair file");
    landscape->add_option("--family", family, "cycle-chain or chain-star");
    landscape->add_option("-i", i_param, "Family parameter");
    add_common_options(*landscape, opt);

    auto* bench = app.add_subcommand("bench", "Solution probability across a family range");
    bench->add_option("--family", family, "cycle-chain or chain-star")->required();
    bench->add_option("--i-from", i_from, "First family parameter")->required();
    bench->add_option("--i-to", i_to, "Last family parameter")->required();
    add_common_options(*bench, opt);

    auto* classify = app.add_subcommand("classify", "Classify a directory of labeled pairs");
    classify->add_option("dir", dir_path, "Directory of labeled pair files")->required();
    add_common_options(*classify, opt);

    auto* verify = app.add_subcommand("verify", "Verify a witness file against a pair");
    verify->add_option("pair", pair_path, "Query pair file")->required();
    verify->add_option("witness", witness_path, "Witness mapping file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        if (decide->parsed()) return cmd_decide(pair_path, opt);
        if (reduce->parsed()) return cmd_reduce(pair_path, opt, qubo_out);
        if (solve->parsed()) return cmd_solve(instance_path, opt);
        if (generate->parsed()) return cmd_generate(family, i_param, opt);
        if (landscape->parsed()) {
            if (pair_path.empty() && family.empty())
                throw cqc::Error("landscape needs --pair or --family with -i");
            return cmd_landscape(pair_path, family, i_param, opt);
        }
        if (bench->parsed()) return cmd_bench(family, i_from, i_to, opt);
        if (classify->parsed()) return cmd_classify(dir_path, opt);
        if (verify->parsed()) return cmd_verify(pair_path, witness_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
