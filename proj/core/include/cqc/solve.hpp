#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqc/reduce.hpp"

namespace cqc {

enum class BetaSchedule { Geometric, Linear };

/// Configuration shared by the simulated annealer and the quantum-annealing
/// emulation.
struct AnnealConfig {
    long long num_reads = 500;
    long long num_sweeps = 1000;
    double beta_start = 0.5;
    double beta_end = 10.0;
    BetaSchedule schedule = BetaSchedule::Geometric;
    std::uint64_t seed = 0;

    /// 0 = one proposal per variable (per one-hot row when constrained) each
    /// sweep; 1 reproduces the single-proposal-per-iteration loop.
    long long proposals_per_sweep = 0;
    /// beta -> infinity limit: never accept an uphill move.
    bool greedy = false;
    /// Pins every read to this start state instead of a random one.
    std::optional<std::vector<std::uint8_t>> fixed_start;

    // Quantum-annealing emulation only.
    double anneal_time = 30.0;
    int statevector_cap = 16;  // qubits

    void validate() const;
};

struct QaoaConfig {
    int layers = 2;
    int iterations = 30;    // objective-evaluation budget of the classical optimizer
    long long shots = 500;
    bool sampled_expectation = false;  // default: exact expectation from the statevector
    std::uint64_t seed = 0;
    int statevector_cap = 24;  // qubits / log2 of the feasible-subspace dimension

    void validate() const;
};

struct SampleEntry {
    std::vector<std::uint8_t> bits;
    long long energy = 0;
    long long count = 0;

    bool operator==(const SampleEntry&) const = default;
};

struct SolverMeta {
    std::string solver;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::map<std::string, std::string> params;
};

/// Multiset of sampled assignments. Entries are aggregated and sorted by
/// (energy, bits); counts sum to the number of reads/shots.
struct SampleSet {
    std::vector<SampleEntry> entries;
    SolverMeta meta;

    long long total_count() const;
    long long best_energy() const;
};

std::string sample_set_to_csv(const SampleSet& s);
std::string solver_meta_to_json(const SolverMeta& m);

struct BruteForceResult {
    long long min_value = 0;
    std::vector<std::vector<std::uint8_t>> argmins;  // lexicographic order
};

/// Exact minimum over the instance's search space (all bitvectors, or all
/// one-hot assignments when constrained). Throws CapExceededError when the
/// space exceeds `cap` states.
BruteForceResult brute_force_min(const ProblemInstance& inst, double cap = 16777216.0);

/// Single-bit-flip Metropolis annealing with the Boltzmann acceptance rule
/// min(1, exp(-delta * beta)); beta follows the configured schedule. Each
/// read is an independent seeded run and reports its final state. Constrained
/// instances anneal over one-hot states, the move reassigning one row's 1 to
/// a uniformly chosen other column.
SampleSet simulated_anneal(const ProblemInstance& inst, const AnnealConfig& cfg);

struct QaoaResult {
    SampleSet samples;
    std::vector<double> beta;   // optimized mixer angles, one per layer
    std::vector<double> gamma;  // optimized phase angles, one per layer
    double best_expectation = 0.0;
    bool improved = false;       // best expectation beat the initial simplex
    double max_norm_drift = 0.0; // max |1 - ||psi||| over all operator applications
};

/// Statevector QAOA. Unconstrained: uniform initial state, per-monomial phase
/// gates, single-qubit X mixer exp(-i beta (1-sigma_x)/2). Constrained:
/// tensor-product-of-W-states initial state and the per-group Grover mixer
/// I + (e^{-i beta} - 1)|W><W|, simulated directly in the feasible subspace.
/// Angles are optimized by Nelder-Mead over the 2*layers parameters.
QaoaResult qaoa_statevector(const ProblemInstance& inst, const QaoaConfig& cfg);

/// State after one application of the problem phase U_p(gamma) to the uniform
/// initial state, using the solver's per-monomial implementation. Index bit
/// order: variable 0 is the most significant bit. For validating the phase
/// construction against the explicit diagonal exp(-i gamma p(x)).
std::vector<std::complex<double>> qaoa_phase_state(const ProblemInstance& inst, double gamma,
                                                   int statevector_cap = 24);

/// Trotterized statevector evolution of H(s) = A(s) H_I + B(s) H_p with
/// A(s) = 1-s, B(s) = s, s = t/t_f, one first-order product step per sweep.
/// Requires degree <= 2 and an unconstrained instance.
SampleSet quantum_anneal_emulate(const ProblemInstance& inst, const AnnealConfig& cfg);

/// Fraction of measurements that attained the target minimum d.
double solution_probability(const SampleSet& s, long long d);

/// Probability of at least one success in `measurements` independent tries,
/// 1 - (1-p)^m.
double at_least_one_probability(double per_measurement_probability, long long measurements);

}  // namespace cqc
