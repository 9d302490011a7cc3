#include "rpf/filter.hpp"
#include "rpf/p_variation.hpp"
#include "rpf/rough_path.hpp"
#include "rpf/rsde.hpp"
#include "rpf/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace rpf;

static RoughPath make_lift(std::size_t cells) {
    MartingaleSample w = sample_brownian(RngStream(11), TimeGrid::uniform(1.0, cells), 2);
    return ito_lift(w.path);
}

static void BM_PVariation(benchmark::State& state) {
    MartingaleSample w =
        sample_brownian(RngStream(3), TimeGrid::uniform(1.0, std::size_t(state.range(0))), 1);
    for (auto _ : state) benchmark::DoNotOptimize(p_variation(w.path, 2.5));
}
BENCHMARK(BM_PVariation)->Arg(64)->Arg(256)->Arg(1024);

static void BM_Reconstruct(benchmark::State& state) {
    RoughPath rp = make_lift(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rp.reconstruct(0, rp.path().size() - 1));
}
BENCHMARK(BM_Reconstruct)->Arg(256)->Arg(4096);

static void BM_SolveRsde(benchmark::State& state) {
    const std::size_t cells = std::size_t(state.range(0));
    CoefficientSet cs = desk_coefficients();
    RngStream root(5);
    TimeGrid grid = TimeGrid::uniform(1.0, cells);
    MartingaleSample m = sample_brownian(root.child("w"), grid, 1);
    MartingaleSample drv = sample_brownian(root.child("x"), grid, 1);
    RoughPath lift = ito_lift(drv.path);
    MarkedEventStream ev = sample_poisson_measure(root.child("ev"), grid, desk_jump_marks());
    TimeGrid full = grid.with_times(ev.event_times());
    RoughPath drv_full = insert_times(lift, full);
    MartingaleSample mf{m.path.restrict(full), m.bracket.restrict(full)};
    for (auto _ : state) {
        ControlledSolution sol = solve_rsde(cs, Vec::Constant(1, 1.0), drv_full, &mf, &ev, true);
        benchmark::DoNotOptimize(sol.y.value(sol.y.size() - 1));
    }
}
BENCHMARK(BM_SolveRsde)->Arg(256)->Arg(2048);

static void BM_FilterStep(benchmark::State& state) {
    FilterModel model = preset_model("jump-desk");
    ObservationRealization obs =
        simulate_observation(model, RngStream(9).child("obs"), TimeGrid::uniform(1.0, 128));
    std::vector<double> cps = {1.0};
    for (auto _ : state) {
        FilterRun run =
            robust_filter(model, obs, std::size_t(state.range(0)), cps, RngStream(9).child("p"));
        benchmark::DoNotOptimize(run.theta[0]);
    }
}
BENCHMARK(BM_FilterStep)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
