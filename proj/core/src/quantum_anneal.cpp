#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>

#include "compiled_poly.hpp"
#include "cqc/rng.hpp"
#include "cqc/solve.hpp"

namespace cqc {

namespace {

using Complex = std::complex<double>;
constexpr std::uint64_t kQaStream = 0x9a;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

SampleSet quantum_anneal_emulate(const ProblemInstance& inst, const AnnealConfig& cfg) {
    cfg.validate();
    if (inst.constrained())
        throw std::invalid_argument(
            "quantum-anneal emulation runs on unconstrained instances only");
    const double start_time = now_seconds();
    const detail::CompiledPoly poly(inst.p);
    const int n = poly.num_vars;
    if (n > cfg.statevector_cap)
        throw CapExceededError("statevector cap exceeded: " + std::to_string(n) + " qubits");

    const IsingModel ising = qubo_to_ising(to_qubo(inst.p));  // throws NotQuboError on degree > 2

    const std::size_t dim = std::size_t{1} << n;
    // Diagonal of H_p in the computational basis: spin s_i = 1 - 2 x_i, so a
    // qubit in |0> carries spin +1.
    std::vector<double> diag(dim, 0.0);
    {
        std::vector<int> spins(n, 1);
        for (std::size_t z = 0; z < dim; ++z) {
            for (int i = 0; i < n; ++i)
                spins[i] = (z >> (n - 1 - i)) & 1 ? -1 : 1;
            diag[z] = boost::rational_cast<double>(ising.raw_energy(spins));
        }
    }

    // Ground state of H_I = sum (1 - sigma_x)/2 is the uniform superposition.
    std::vector<Complex> state(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    const double dt = cfg.anneal_time / static_cast<double>(cfg.num_sweeps);
    for (long long iter = 0; iter < cfg.num_sweeps; ++iter) {
        const double s = static_cast<double>(iter) * dt / cfg.anneal_time;
        const double a = 1.0 - s;
        const double b = s;
        // exp(-i dt B H_p): diagonal phases.
        for (std::size_t z = 0; z < dim; ++z)
            state[z] *= std::polar(1.0, -dt * b * diag[z]);
        // exp(-i dt A H_I): product of single-qubit rotations.
        const double theta = dt * a;
        const Complex global = std::polar(1.0, -theta / 2.0);
        const double c = std::cos(theta / 2.0);
        const Complex is(0.0, std::sin(theta / 2.0));
        for (int i = 0; i < n; ++i) {
            const std::size_t bit = std::size_t{1} << (n - 1 - i);
            for (std::size_t z = 0; z < dim; ++z) {
                if (z & bit) continue;
                const Complex a0 = state[z];
                const Complex a1 = state[z | bit];
                state[z] = global * (c * a0 + is * a1);
                state[z | bit] = global * (is * a0 + c * a1);
            }
        }
    }

    std::vector<double> cumulative(dim);
    double acc = 0.0;
    for (std::size_t z = 0; z < dim; ++z) {
        acc += std::norm(state[z]);
        cumulative[z] = acc;
    }
    Rng rng = derive_rng(cfg.seed, {kQaStream});
    std::map<std::vector<std::uint8_t>, long long> counts;
    for (long long read = 0; read < cfg.num_reads; ++read) {
        const double u = rng.uniform01() * acc;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t z = static_cast<std::size_t>(it - cumulative.begin());
        counts[detail::bits_from_code(z, n)] += 1;
    }

    SampleSet out;
    for (auto& [bits, count] : counts)
        out.entries.push_back({bits, poly.evaluate(bits), count});
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SampleEntry& a, const SampleEntry& b) {
                  if (a.energy != b.energy) return a.energy < b.energy;
                  return a.bits < b.bits;
              });
    out.meta.solver = "qa-emulate";
    out.meta.seed = cfg.seed;
    out.meta.wall_seconds = now_seconds() - start_time;
    out.meta.params = {{"num_reads", std::to_string(cfg.num_reads)},
                       {"num_sweeps", std::to_string(cfg.num_sweeps)},
                       {"anneal_time", std::to_string(cfg.anneal_time)}};
    return out;
}

}  // namespace cqc
