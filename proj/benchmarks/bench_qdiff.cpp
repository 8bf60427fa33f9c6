#include <benchmark/benchmark.h>

#include "qdiff/eigen.hpp"
#include "qdiff/pdesim.hpp"
#include "qdiff/speed.hpp"

namespace {

using namespace qdiff;

PeriodicField bench_r() { return PeriodicField::cosine_squared(0.0, 1.0, 0.0); }
PeriodicField bench_D() { return PeriodicField::cosine_squared(0.1, 1.0, 0.0); }

void BM_CyclicSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    OperatorSpec spec{bench_r(), bench_D(), 1.0, 0.5, n};
    const PeriodicTridiagonal M = assemble(spec);
    std::vector<double> sub(n), diag(n), super(n), rhs(n, 1.0);
    for (int i = 0; i < n; ++i) {
        sub[i] = -M.sub[i];
        diag[i] = 10.0 - M.diag[i];
        super[i] = -M.super[i];
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(
            solve_cyclic_tridiagonal(sub, diag, super, rhs));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CyclicSolve)->Arg(512)->Arg(4096)->Arg(32768);

void BM_Eigenpair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    OperatorSpec spec{bench_r(), bench_D(), 1.0, 0.5, n};
    const PeriodicTridiagonal M = assemble(spec);
    for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(M));
}
BENCHMARK(BM_Eigenpair)->Arg(512)->Arg(2048)->Arg(8192);

void BM_KValue(benchmark::State& state) {
    const auto r = bench_r();
    const auto D = bench_D();
    for (auto _ : state) {
        EigenWorkspace ws;
        benchmark::DoNotOptimize(k_value(r, D, 1.0, 0.5, 1e-8, &ws));
    }
}
BENCHMARK(BM_KValue);

void BM_SpreadingSpeed(benchmark::State& state) {
    const auto r = bench_r();
    const auto D = bench_D();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            spreading_speed(r, D, 1.0, Direction::right, 1e-6));
}
BENCHMARK(BM_SpreadingSpeed);

void BM_PdeStep(benchmark::State& state) {
    SimConfig cfg;
    cfg.r = bench_r();
    cfg.D = bench_D();
    cfg.q = 1.0;
    cfg.domain_length = 64.0;
    detail::Simulator sim(cfg);
    for (int i = 0; i < sim.cells(); ++i)
        sim.state()[i] = i * sim.dx() <= 10.0 ? 1.0 : 0.0;
    for (auto _ : state) sim.advance();
    state.SetItemsProcessed(state.iterations() * sim.cells());
}
BENCHMARK(BM_PdeStep);

}  // namespace

BENCHMARK_MAIN();
