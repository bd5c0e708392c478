#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>

#include "compiled_poly.hpp"
#include "cqc/nelder_mead.hpp"
#include "cqc/rng.hpp"
#include "cqc/solve.hpp"

namespace cqc {

namespace {

using Complex = std::complex<double>;
constexpr std::uint64_t kQaoaInit = 0x9a0a01;
constexpr std::uint64_t kQaoaObjective = 0x9a0a02;
constexpr std::uint64_t kQaoaFinal = 0x9a0a03;
constexpr double kPi = 3.14159265358979323846;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Basis bookkeeping for either the full 2^n space or the one-hot feasible
// subspace (a mixed-radix product of per-row column choices, last group
// fastest).
struct BasisSpace {
    const ProblemInstance& inst;
    detail::CompiledPoly poly;
    bool constrained;
    int n;
    std::size_t dim = 0;
    std::vector<std::size_t> strides;  // constrained
    std::vector<long long> energies;

    explicit BasisSpace(const ProblemInstance& instance, int cap_qubits)
        : inst(instance), poly(instance.p), constrained(instance.constrained()),
          n(instance.p.num_vars()) {
        if (!constrained) {
            if (n > cap_qubits)
                throw CapExceededError("statevector cap exceeded: " + std::to_string(n) +
                                       " qubits");
            dim = std::size_t{1} << n;
        } else {
            const auto& groups = *inst.groups;
            double size = 1.0;
            for (const auto& g : groups) size *= static_cast<double>(g.size());
            if (size > std::ldexp(1.0, cap_qubits))
                throw CapExceededError("feasible-subspace cap exceeded");
            for (const auto& g : groups)
                if (g.empty()) throw Error("one-hot group without variables");
            dim = 1;
            strides.assign(groups.size(), 1);
            for (std::size_t g = groups.size(); g > 0;) {
                --g;
                strides[g] = dim;
                dim *= groups[g].size();
            }
        }
        energies.resize(dim);
        std::vector<std::uint8_t> bits(n, 0);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            decode(idx, bits);
            energies[idx] = poly.evaluate(bits);
        }
    }

    void decode(std::size_t idx, std::vector<std::uint8_t>& bits) const {
        if (!constrained) {
            for (int i = 0; i < n; ++i) bits[i] = (idx >> (n - 1 - i)) & 1;
            return;
        }
        std::fill(bits.begin(), bits.end(), 0);
        const auto& groups = *inst.groups;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const std::size_t c = (idx / strides[g]) % groups[g].size();
            bits[groups[g][c]] = 1;
        }
    }
};

struct Evolver {
    const BasisSpace& space;
    std::vector<Complex> state;
    double max_norm_drift = 0.0;

    explicit Evolver(const BasisSpace& s) : space(s) {}

    void reset_uniform() {
        state.assign(space.dim, Complex(1.0 / std::sqrt(static_cast<double>(space.dim)), 0.0));
    }

    void note_norm() {
        double norm2 = 0.0;
        for (const Complex& a : state) norm2 += std::norm(a);
        max_norm_drift = std::max(max_norm_drift, std::abs(1.0 - std::sqrt(norm2)));
    }

    // U_p(gamma): one multi-controlled phase per monomial on the full space;
    // the precomputed diagonal on the feasible subspace (identical action).
    void apply_phase(double gamma) {
        if (!space.constrained) {
            for (const auto& [vars, coef] : space.inst.p.terms()) {
                std::uint64_t mask = 0;
                for (VarId v : vars) mask |= std::uint64_t{1} << (space.n - 1 - v);
                const Complex phase = std::polar(1.0, -gamma * static_cast<double>(coef));
                for (std::size_t z = 0; z < space.dim; ++z)
                    if ((z & mask) == mask) state[z] *= phase;
            }
        } else {
            for (std::size_t z = 0; z < space.dim; ++z)
                state[z] *= std::polar(1.0, -gamma * static_cast<double>(space.energies[z]));
        }
        note_norm();
    }

    // Unconstrained mixer: per qubit exp(-i beta (1 - sigma_x)/2).
    void apply_x_mixer(double beta) {
        const Complex global = std::polar(1.0, -beta / 2.0);
        const double c = std::cos(beta / 2.0);
        const Complex is(0.0, std::sin(beta / 2.0));
        for (int i = 0; i < space.n; ++i) {
            const std::size_t bit = std::size_t{1} << (space.n - 1 - i);
            for (std::size_t z = 0; z < space.dim; ++z) {
                if (z & bit) continue;
                const Complex a0 = state[z];
                const Complex a1 = state[z | bit];
                state[z] = global * (c * a0 + is * a1);
                state[z | bit] = global * (is * a0 + c * a1);
            }
        }
        note_norm();
    }

    // Constrained mixer: per group I + (e^{-i beta} - 1)|W><W|.
    void apply_grover_mixer(double beta) {
        const Complex factor = std::polar(1.0, -beta) - Complex(1.0, 0.0);
        const auto& groups = *space.inst.groups;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const std::size_t size = groups[g].size();
            const std::size_t stride = space.strides[g];
            const std::size_t block = size * stride;
            for (std::size_t base = 0; base < space.dim; base += block) {
                for (std::size_t off = 0; off < stride; ++off) {
                    Complex sum(0.0, 0.0);
                    for (std::size_t k = 0; k < size; ++k)
                        sum += state[base + off + k * stride];
                    const Complex add = factor * (sum / static_cast<double>(size));
                    for (std::size_t k = 0; k < size; ++k)
                        state[base + off + k * stride] += add;
                }
            }
        }
        note_norm();
    }

    void build(const std::vector<double>& betas, const std::vector<double>& gammas) {
        reset_uniform();
        for (std::size_t l = 0; l < gammas.size(); ++l) {
            apply_phase(gammas[l]);
            if (space.constrained)
                apply_grover_mixer(betas[l]);
            else
                apply_x_mixer(betas[l]);
        }
    }

    double exact_expectation() const {
        double total = 0.0;
        for (std::size_t z = 0; z < space.dim; ++z)
            total += std::norm(state[z]) * static_cast<double>(space.energies[z]);
        return total;
    }

    std::vector<std::size_t> sample(long long shots, Rng& rng) const {
        std::vector<double> cumulative(space.dim);
        double acc = 0.0;
        for (std::size_t z = 0; z < space.dim; ++z) {
            acc += std::norm(state[z]);
            cumulative[z] = acc;
        }
        std::vector<std::size_t> out;
        out.reserve(shots);
        for (long long s = 0; s < shots; ++s) {
            const double u = rng.uniform01() * acc;
            const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
            out.push_back(static_cast<std::size_t>(it - cumulative.begin()));
        }
        return out;
    }
};

}  // namespace

std::vector<std::complex<double>> qaoa_phase_state(const ProblemInstance& inst, double gamma,
                                                   int statevector_cap) {
    if (inst.constrained())
        throw std::invalid_argument("phase probe runs on the unconstrained representation");
    const BasisSpace space(inst, statevector_cap);
    Evolver evolver(space);
    evolver.reset_uniform();
    evolver.apply_phase(gamma);
    return evolver.state;
}

QaoaResult qaoa_statevector(const ProblemInstance& inst, const QaoaConfig& cfg) {
    cfg.validate();
    const double start_time = now_seconds();
    const BasisSpace space(inst, cfg.statevector_cap);
    Evolver evolver(space);

    const int layers = cfg.layers;
    QaoaResult result;
    std::vector<double> best_params(2 * layers, 0.0);

    if (layers > 0) {
        long long objective_calls = 0;
        auto objective = [&](const std::vector<double>& params) {
            std::vector<double> betas(params.begin(), params.begin() + layers);
            std::vector<double> gammas(params.begin() + layers, params.end());
            evolver.build(betas, gammas);
            ++objective_calls;
            if (!cfg.sampled_expectation) return evolver.exact_expectation();
            Rng rng = derive_rng(cfg.seed, {kQaoaObjective,
                                            static_cast<std::uint64_t>(objective_calls)});
            const auto samples = evolver.sample(cfg.shots, rng);
            double mean = 0.0;
            for (std::size_t idx : samples)
                mean += static_cast<double>(space.energies[idx]);
            return mean / static_cast<double>(cfg.shots);
        };

        Rng init_rng = derive_rng(cfg.seed, {kQaoaInit});
        std::vector<std::vector<double>> simplex(2 * layers + 1,
                                                 std::vector<double>(2 * layers));
        for (auto& vertex : simplex)
            for (double& p : vertex) p = init_rng.uniform01() * 2.0 * kPi;

        const NelderMeadResult nm = nelder_mead(objective, std::move(simplex), cfg.iterations);
        best_params = nm.x;
        result.best_expectation = nm.value;
        result.improved = nm.improved;
    }

    result.beta.assign(best_params.begin(), best_params.begin() + layers);
    result.gamma.assign(best_params.begin() + layers, best_params.end());
    evolver.build(result.beta, result.gamma);
    if (layers == 0) result.best_expectation = evolver.exact_expectation();
    result.max_norm_drift = evolver.max_norm_drift;

    Rng final_rng = derive_rng(cfg.seed, {kQaoaFinal});
    const auto samples = evolver.sample(cfg.shots, final_rng);
    std::map<std::vector<std::uint8_t>, long long> counts;
    std::vector<std::uint8_t> bits(space.n, 0);
    for (std::size_t idx : samples) {
        space.decode(idx, bits);
        counts[bits] += 1;
    }
    for (auto& [sample_bits, count] : counts)
        result.samples.entries.push_back(
            {sample_bits, space.poly.evaluate(sample_bits), count});
    std::sort(result.samples.entries.begin(), result.samples.entries.end(),
              [](const SampleEntry& a, const SampleEntry& b) {
                  if (a.energy != b.energy) return a.energy < b.energy;
                  return a.bits < b.bits;
              });

    result.samples.meta.solver = "qaoa";
    result.samples.meta.seed = cfg.seed;
    result.samples.meta.wall_seconds = now_seconds() - start_time;
    result.samples.meta.params = {
        {"layers", std::to_string(layers)},
        {"iterations", std::to_string(cfg.iterations)},
        {"shots", std::to_string(cfg.shots)},
        {"constrained", space.constrained ? "true" : "false"},
        {"expectation", cfg.sampled_expectation ? "sampled" : "exact"},
        {"best_expectation", std::to_string(result.best_expectation)},
        {"max_norm_drift", std::to_string(result.max_norm_drift)},
    };
    return result;
}

}  // namespace cqc
