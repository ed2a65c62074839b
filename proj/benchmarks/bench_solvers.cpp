#include <benchmark/benchmark.h>

#include <cmath>

#include "edgealloc/baselines.hpp"
#include "edgealloc/scalar_opt.hpp"
#include "edgealloc/solver_mc.hpp"
#include "edgealloc/solver_mg.hpp"

using namespace edgealloc;

static void BM_MinimizeBox(benchmark::State& state) {
    auto fn = [](double x) { return 1.0 / x + 0.3 * x * x; };
    for (auto _ : state) benchmark::DoNotOptimize(minimize_box({fn, 0.0, 10.0, 1e-8}));
}
BENCHMARK(BM_MinimizeBox);

static void BM_MgStep(benchmark::State& state) {
    Scenario s = identical_scenario();
    MgConfig c;
    MgState x = mg_initial_state(s, c);
    for (auto _ : state) benchmark::DoNotOptimize(mg_step(x, s, c));
}
BENCHMARK(BM_MgStep);

static void BM_SolveMg(benchmark::State& state) {
    Scenario s = identical_scenario(static_cast<int>(state.range(0)));
    s.server.storage = 20.0 * s.size() + 100.0;  // room for large N
    for (auto _ : state) benchmark::DoNotOptimize(solve_mg(s));
}
BENCHMARK(BM_SolveMg)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_McStep(benchmark::State& state) {
    Scenario s = heterogeneous_scenario(static_cast<int>(state.range(0)));
    McConfig c;
    McState x = mc_initial_state(s, c);
    for (auto _ : state) benchmark::DoNotOptimize(mc_step(x, s, c));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_McStep)->RangeMultiplier(2)->Range(2, 32)->Complexity()->Unit(benchmark::kMicrosecond);

static void BM_SolveMc(benchmark::State& state) {
    Scenario s = heterogeneous_scenario();
    for (auto _ : state) benchmark::DoNotOptimize(solve_mc(s));
}
BENCHMARK(BM_SolveMc)->Unit(benchmark::kMillisecond);

static void BM_RandomBaseline(benchmark::State& state) {
    Scenario s = identical_scenario();
    BaselineOptions o;
    for (auto _ : state) benchmark::DoNotOptimize(run_baseline(RandomBaseline{}, s, o));
}
BENCHMARK(BM_RandomBaseline)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
