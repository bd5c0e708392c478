#include <benchmark/benchmark.h>

#include "cqc/families.hpp"
#include "cqc/landscape.hpp"
#include "cqc/reduce.hpp"
#include "cqc/solve.hpp"

namespace {

cqc::ProblemInstance chain_instance(int i) {
    const cqc::FamilyInstance fam = cqc::gen_cycle_chain(i);
    return std::get<cqc::ProblemInstance>(cqc::build_generic(fam.q1, fam.q2));
}

void BM_reduce_cycle_chain(benchmark::State& state) {
    const cqc::FamilyInstance fam = cqc::gen_cycle_chain(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cqc::build_generic(fam.q1, fam.q2));
}
BENCHMARK(BM_reduce_cycle_chain)->Arg(4)->Arg(16)->Arg(64);

void BM_simulated_anneal(benchmark::State& state) {
    const cqc::ProblemInstance inst = chain_instance(static_cast<int>(state.range(0)));
    cqc::AnnealConfig cfg;
    cfg.num_reads = 50;
    cfg.seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(cqc::simulated_anneal(inst, cfg));
}
BENCHMARK(BM_simulated_anneal)->Arg(2)->Arg(6)->Arg(12);

void BM_brute_force(benchmark::State& state) {
    const cqc::ProblemInstance inst = chain_instance(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cqc::brute_force_min(inst));
}
BENCHMARK(BM_brute_force)->Arg(3)->Arg(6)->Arg(8);

void BM_landscape(benchmark::State& state) {
    const cqc::ProblemInstance inst = chain_instance(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cqc::enumerate_landscape(inst));
}
BENCHMARK(BM_landscape)->Arg(3)->Arg(6)->Arg(8);

void BM_qaoa_constrained(benchmark::State& state) {
    const cqc::ProblemInstance inst =
        cqc::apply_constraints(chain_instance(static_cast<int>(state.range(0))));
    cqc::QaoaConfig cfg;
    cfg.iterations = 10;
    cfg.shots = 100;
    for (auto _ : state)
        benchmark::DoNotOptimize(cqc::qaoa_statevector(inst, cfg));
}
BENCHMARK(BM_qaoa_constrained)->Arg(2)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
