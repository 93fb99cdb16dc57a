// Serial reference vs OpenMP kernels. Thread count follows MC_ARELAB_THREADS.
#include "arelab/config.hpp"
#include "arelab/montecarlo.hpp"
#include "arelab/pbs.hpp"
#include "arelab/perf.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace arelab;

const std::vector<double>& pitches() {
    static const std::vector<double> v = geometric_grid(0.1, 1.0, 16);
    return v;
}

void BM_SweepSerial(benchmark::State& state) {
    const SystemConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(cfg, SweepAxis::CellPitch, pitches()));
}

void BM_SweepParallel(benchmark::State& state) {
    const SystemConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg, SweepAxis::CellPitch, pitches()));
}

McSettings mc_settings(McMode mode) {
    McSettings s;
    s.samples = 200'000;
    s.theta_max = 40;
    s.mode = mode;
    s.seed = 7;
    return s;
}

void BM_McSerial(benchmark::State& state) {
    const ChannelSummary summary = validation_summary(SystemConfig{});
    const McSettings s = mc_settings(static_cast<McMode>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_serial(summary, s));
}

void BM_McParallel(benchmark::State& state) {
    const ChannelSummary summary = validation_summary(SystemConfig{});
    const McSettings s = mc_settings(static_cast<McMode>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run(summary, s));
}

PbsConfig pbs_settings() {
    PbsConfig p;
    p.t_sim = 5.0;
    p.realizations = 200;
    return p;
}

void BM_PbsSerial(benchmark::State& state) {
    const PhysicalParams p = SystemConfig{}.physical();
    const ReceiverGeometry g = ReceiverGeometry::centered(p);
    const PbsConfig cfg = pbs_settings();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cir_serial(p, g, 0.0, 0.0, cfg));
}

void BM_PbsParallel(benchmark::State& state) {
    const PhysicalParams p = SystemConfig{}.physical();
    const ReceiverGeometry g = ReceiverGeometry::centered(p);
    const PbsConfig cfg = pbs_settings();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cir(p, g, 0.0, 0.0, cfg));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_McSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PbsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PbsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
