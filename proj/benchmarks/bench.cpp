#include <benchmark/benchmark.h>

#include "misodof/polytope.hpp"
#include "misodof/region_builder.hpp"
#include "misodof/schemes.hpp"
#include "misodof/simulate.hpp"

using namespace misodof;

namespace {

MarginalProfile profile(int k) {
  return MarginalProfile::symmetric(k, Rational(1, 3), Rational(1, 3));
}

void BM_BuildRegion(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto m = profile(k);
  for (auto _ : state) {
    auto region = build_region(m);
    benchmark::DoNotOptimize(region);
  }
}
BENCHMARK(BM_BuildRegion)->Arg(3)->Arg(4)->Arg(5)->Arg(6);

void BM_LpMaxSum(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto region = build_region(profile(k));
  const std::vector<Rational> obj(k, Rational(1));
  for (auto _ : state) {
    auto lp = lp_max(region, obj);
    benchmark::DoNotOptimize(lp);
  }
}
BENCHMARK(BM_LpMaxSum)->Arg(3)->Arg(4)->Arg(5);

void BM_RemoveRedundant(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto region = build_region(profile(k));
  for (auto _ : state) {
    auto reduced = remove_redundant(region);
    benchmark::DoNotOptimize(reduced);
  }
}
BENCHMARK(BM_RemoveRedundant)->Arg(3)->Arg(4);

void BM_Vertices(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto region = build_region(profile(k));
  for (auto _ : state) {
    auto verts = vertices(region);
    benchmark::DoNotOptimize(verts);
  }
}
BENCHMARK(BM_Vertices)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MatSchedule(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto schedule = mat_schedule(k, 1);
    benchmark::DoNotOptimize(schedule);
  }
}
BENCHMARK(BM_MatSchedule)->Arg(3)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SimulateDecode(benchmark::State& state) {
  const auto s = overheard_retransmission_scheme();
  const SchemeConfig config{3, 3, {}, static_cast<int>(state.range(0)), 7};
  for (auto _ : state) {
    auto verdict = simulate_decode(s.schedule, config);
    benchmark::DoNotOptimize(verdict);
  }
}
BENCHMARK(BM_SimulateDecode)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
