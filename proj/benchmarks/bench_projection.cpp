#include <benchmark/benchmark.h>

#include "radial/identity.hpp"
#include "radial/measure.hpp"
#include "radial/projection.hpp"

using namespace radial;

static void BM_RadialPushforward(benchmark::State& state) {
  const auto m = build_ifs_measure(four_corner_maps(), static_cast<int>(state.range(0)));
  const Point x{-0.5, 0.3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(radial_pushforward(m, x, 4096));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_RadialPushforward)->DenseRange(4, 8, 2);

static void BM_WeightedDensity(benchmark::State& state) {
  const auto m = uniform_measure(2, static_cast<int>(state.range(0)));
  const Point x{1.5, 0.5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(weighted_radial_density(m, x, 1024));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_WeightedDensity)->Arg(6)->Arg(8);

static void BM_ProjectionIdentity(benchmark::State& state) {
  const auto [mu, nu] = bundled_bump_pair();
  for (auto _ : state) benchmark::DoNotOptimize(verify_projection_identity(mu, nu, 1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ProjectionIdentity)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
