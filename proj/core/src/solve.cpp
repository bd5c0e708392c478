#include "cqc/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "compiled_poly.hpp"
#include "cqc/rng.hpp"

namespace cqc {

namespace {

constexpr std::uint64_t kSaStream = 0x5a;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<SampleEntry> aggregate(std::map<std::vector<std::uint8_t>, long long> counts,
                                   const detail::CompiledPoly& poly) {
    std::vector<SampleEntry> entries;
    entries.reserve(counts.size());
    for (auto& [bits, count] : counts)
        entries.push_back({bits, poly.evaluate(bits), count});
    std::sort(entries.begin(), entries.end(), [](const SampleEntry& a, const SampleEntry& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    return entries;
}

}  // namespace

void AnnealConfig::validate() const {
    if (num_reads < 1) throw std::invalid_argument("num_reads must be >= 1");
    if (num_sweeps < 1) throw std::invalid_argument("num_sweeps must be >= 1");
    if (!greedy && !(beta_start < beta_end))
        throw std::invalid_argument("beta_start must be < beta_end");
    if (beta_start <= 0) throw std::invalid_argument("beta range must be positive");
    if (anneal_time <= 0) throw std::invalid_argument("anneal_time must be positive");
}

void QaoaConfig::validate() const {
    if (layers < 0) throw std::invalid_argument("layers must be >= 0");
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
}

long long SampleSet::total_count() const {
    long long total = 0;
    for (const SampleEntry& e : entries) total += e.count;
    return total;
}

long long SampleSet::best_energy() const {
    if (entries.empty()) throw Error("empty sample set");
    return entries.front().energy;  // entries sorted by energy
}

std::string sample_set_to_csv(const SampleSet& s) {
    std::ostringstream out;
    out << "assignment_bits,energy,count\n";
    for (const SampleEntry& e : s.entries) {
        for (std::uint8_t b : e.bits) out << (b ? '1' : '0');
        out << "," << e.energy << "," << e.count << "\n";
    }
    return out.str();
}

std::string solver_meta_to_json(const SolverMeta& m) {
    nlohmann::json j{{"solver", m.solver},
                     {"seed", m.seed},
                     {"wall_seconds", m.wall_seconds},
                     {"params", m.params}};
    return j.dump(2);
}

BruteForceResult brute_force_min(const ProblemInstance& inst, double cap) {
    const detail::CompiledPoly poly(inst.p);
    const int n = poly.num_vars;
    if (inst.search_space_size() > cap)
        throw CapExceededError("brute force cap exceeded: search space has " +
                               std::to_string(inst.search_space_size()) + " states");

    if (n >= 63) throw CapExceededError("brute force limited to fewer than 63 variables");

    BruteForceResult result;
    if (n == 0) {
        result.min_value = inst.p.constant_term();
        result.argmins.push_back({});
        return result;
    }

    bool first = true;
    auto consider = [&](const std::vector<std::uint8_t>& bits) {
        const long long value = poly.evaluate(bits);
        if (first || value < result.min_value) {
            result.min_value = value;
            result.argmins.clear();
            first = false;
        }
        if (value == result.min_value) result.argmins.push_back(bits);
    };

    if (!inst.constrained()) {
        const std::uint64_t states = 1ULL << n;
        for (std::uint64_t code = 0; code < states; ++code)
            consider(detail::bits_from_code(code, n));
        return result;  // ascending codes are already lexicographic
    }

    const auto& groups = *inst.groups;
    for (const auto& g : groups)
        if (g.empty()) throw Error("one-hot group without variables has no feasible state");
    std::vector<std::size_t> choice(groups.size(), 0);
    std::vector<std::uint8_t> bits(n, 0);
    for (const auto& g : groups) bits[g[0]] = 1;
    while (true) {
        consider(bits);
        bool carried = true;
        for (std::size_t g = groups.size(); g > 0 && carried;) {
            --g;
            bits[groups[g][choice[g]]] = 0;
            if (++choice[g] < groups[g].size()) {
                carried = false;
                bits[groups[g][choice[g]]] = 1;
            } else {
                choice[g] = 0;
                bits[groups[g][0]] = 1;
            }
        }
        if (carried) break;  // odometer wrapped
    }
    std::sort(result.argmins.begin(), result.argmins.end());
    return result;
}

SampleSet simulated_anneal(const ProblemInstance& inst, const AnnealConfig& cfg) {
    cfg.validate();
    const double start_time = now_seconds();
    const detail::CompiledPoly poly(inst.p);
    const int n = poly.num_vars;

    const bool one_hot = inst.constrained();
    const auto& groups_opt = inst.groups;
    const long long proposals =
        cfg.proposals_per_sweep > 0
            ? cfg.proposals_per_sweep
            : std::max<long long>(1, one_hot ? static_cast<long long>(groups_opt->size()) : n);

    const double beta_ratio = cfg.beta_end / cfg.beta_start;
    auto beta_at = [&](long long k) {
        const double frac = static_cast<double>(k) / static_cast<double>(cfg.num_sweeps);
        if (cfg.schedule == BetaSchedule::Geometric)
            return cfg.beta_start * std::pow(beta_ratio, frac);
        return cfg.beta_start + (cfg.beta_end - cfg.beta_start) * frac;
    };

    if (cfg.fixed_start && static_cast<int>(cfg.fixed_start->size()) != n)
        throw std::invalid_argument("fixed start length does not match num_vars");

    std::map<std::vector<std::uint8_t>, long long> counts;
    for (long long read = 0; read < cfg.num_reads; ++read) {
        Rng rng = derive_rng(cfg.seed, {kSaStream, static_cast<std::uint64_t>(read)});
        std::vector<std::uint8_t> bits(n, 0);
        std::vector<std::size_t> choice;  // one-hot: current column per group
        if (cfg.fixed_start) {
            bits = *cfg.fixed_start;
            if (one_hot) {
                choice.resize(groups_opt->size());
                for (std::size_t g = 0; g < groups_opt->size(); ++g) {
                    const auto& group = (*groups_opt)[g];
                    std::size_t found = group.size();
                    int ones = 0;
                    for (std::size_t j = 0; j < group.size(); ++j)
                        if (bits[group[j]]) {
                            found = j;
                            ++ones;
                        }
                    if (ones != 1)
                        throw std::invalid_argument("fixed start is not one-hot per row");
                    choice[g] = found;
                }
            }
        } else if (one_hot) {
            choice.resize(groups_opt->size());
            for (std::size_t g = 0; g < groups_opt->size(); ++g) {
                const auto& group = (*groups_opt)[g];
                if (group.empty()) continue;
                choice[g] = static_cast<std::size_t>(rng.below(group.size()));
                bits[group[choice[g]]] = 1;
            }
        } else {
            for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(rng.below(2));
        }

        if (n > 0) {
            for (long long sweep = 0; sweep < cfg.num_sweeps; ++sweep) {
                const double beta = beta_at(sweep);
                for (long long prop = 0; prop < proposals; ++prop) {
                    long long delta = 0;
                    VarId flip_off = 0, flip_on = 0;
                    std::size_t moved_group = 0, next_choice = 0;
                    bool pair_move = false;
                    if (!one_hot) {
                        flip_on = static_cast<VarId>(rng.below(n));
                        delta = poly.flip_delta(bits, flip_on);
                    } else {
                        const std::size_t g =
                            static_cast<std::size_t>(rng.below(groups_opt->size()));
                        const auto& group = (*groups_opt)[g];
                        if (group.size() < 2) continue;  // no alternative column
                        const std::size_t cur = choice[g];
                        std::size_t next =
                            static_cast<std::size_t>(rng.below(group.size() - 1));
                        if (next >= cur) ++next;
                        flip_off = group[cur];
                        flip_on = group[next];
                        moved_group = g;
                        next_choice = next;
                        pair_move = true;
                        delta = poly.flip_delta(bits, flip_off);
                        bits[flip_off] = 0;
                        delta += poly.flip_delta(bits, flip_on);
                        bits[flip_off] = 1;
                    }
                    bool accept;
                    if (delta < 0) {
                        accept = true;
                    } else if (cfg.greedy) {
                        accept = delta == 0;
                    } else {
                        accept = rng.uniform01() < std::exp(-static_cast<double>(delta) * beta);
                    }
                    if (accept) {
                        if (pair_move) {
                            bits[flip_off] = 0;
                            bits[flip_on] = 1;
                            choice[moved_group] = next_choice;
                        } else {
                            bits[flip_on] ^= 1;
                        }
                    }
                }
            }
        }
        counts[bits] += 1;
    }

    SampleSet out;
    out.entries = aggregate(std::move(counts), poly);
    out.meta.solver = "sa";
    out.meta.seed = cfg.seed;
    out.meta.wall_seconds = now_seconds() - start_time;
    out.meta.params = {{"num_reads", std::to_string(cfg.num_reads)},
                       {"num_sweeps", std::to_string(cfg.num_sweeps)},
                       {"beta_start", std::to_string(cfg.beta_start)},
                       {"beta_end", std::to_string(cfg.beta_end)},
                       {"schedule", cfg.schedule == BetaSchedule::Geometric ? "geometric"
                                                                            : "linear"},
                       {"proposals_per_sweep", std::to_string(proposals)},
                       {"constrained", one_hot ? "true" : "false"}};
    return out;
}

double solution_probability(const SampleSet& s, long long d) {
    const long long total = s.total_count();
    if (total == 0) throw Error("empty sample set");
    long long hits = 0;
    for (const SampleEntry& e : s.entries)
        if (e.energy == d) hits += e.count;
    return static_cast<double>(hits) / static_cast<double>(total);
}

double at_least_one_probability(double per_measurement_probability, long long measurements) {
    return 1.0 - std::pow(1.0 - per_measurement_probability,
                          static_cast<double>(measurements));
}

}  // namespace cqc
