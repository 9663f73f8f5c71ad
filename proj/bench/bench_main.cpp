// Micro and macro benchmarks. The sweep pair compares the serial reference
// with the OpenMP runner on identical cases.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "abc/abc_router.hpp"
#include "abc/engine.hpp"
#include "abc/fluid.hpp"
#include "abc/sweep.hpp"
#include "abc/topk.hpp"

namespace {

using namespace abc;

void BM_Marker(benchmark::State& state) {
  MarkerState marker;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> fraction(0.0, 1.0);
  std::vector<double> fs(4096);
  for (auto& f : fs) f = fraction(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(marker.mark(EcnCodepoint::Accel, fs[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Marker);

void BM_SpaceSaving(benchmark::State& state) {
  SpaceSavingSketch sketch(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::geometric_distribution<FlowId> flow(0.05);
  for (auto _ : state) sketch.record(flow(rng), 1500);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SpaceSaving)->Arg(10)->Arg(64)->Arg(256);

void BM_Fluid(benchmark::State& state) {
  FluidParams p;
  p.flows = 10;
  for (auto _ : state) {
    auto traj = integrate(p, [](double) { return 0.0; }, sec(30), default_step(p));
    benchmark::DoNotOptimize(traj.x_s.data());
  }
}
BENCHMARK(BM_Fluid)->Unit(benchmark::kMillisecond);

Topology fixed_link(unsigned flows) {
  Topology t;
  HopSpec h;
  h.name = "bottleneck";
  h.link = LinkProcess::fixed(24e6);
  t.hops.push_back(h);
  for (unsigned i = 0; i < flows; ++i) {
    FlowSpec f;
    f.id = i + 1;
    t.flows.push_back(f);
  }
  return t;
}

void BM_Engine(benchmark::State& state) {
  const auto topo = fixed_link(static_cast<unsigned>(state.range(0)));
  RunOptions opts;
  opts.record_hop_records = false;
  for (auto _ : state) {
    auto log = run(topo, sec(10), 1, opts);
    benchmark::DoNotOptimize(log);
  }
}
BENCHMARK(BM_Engine)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

std::vector<SweepCase> sweep_cases() {
  std::vector<SweepCase> cases;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    SweepCase c;
    c.topology = fixed_link(4);
    c.duration = sec(5);
    c.seed = seed;
    c.options.record_hop_records = false;
    cases.push_back(c);
  }
  return cases;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cases = sweep_cases();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(cases));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepParallel(benchmark::State& state) {
  const auto cases = sweep_cases();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cases));
}
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
