#include <benchmark/benchmark.h>

#include <vector>

#include "radial/measure.hpp"
#include "radial/scale.hpp"

using namespace radial;

static void BM_BoxDimension(benchmark::State& state) {
  const auto m = build_ifs_measure(middle_thirds_product_maps(), static_cast<int>(state.range(0)));
  const auto scales = dyadic_scales(1, m.level());
  for (auto _ : state) benchmark::DoNotOptimize(box_dimension(m, scales));
}
BENCHMARK(BM_BoxDimension)->Arg(5)->Arg(7);

// Direct pair sum against the FFT convolution on the same measure.
static void BM_RieszEnergy(benchmark::State& state) {
  const auto m = uniform_measure(2, static_cast<int>(state.range(0)));
  EnergyOptions opt;
  opt.method = state.range(1) ? EnergyMethod::kFft : EnergyMethod::kDirect;
  for (auto _ : state) benchmark::DoNotOptimize(riesz_energy(m, 1.5, opt));
}
BENCHMARK(BM_RieszEnergy)->ArgsProduct({{5, 6}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_DirectionSet(benchmark::State& state) {
  const auto pts = build_ifs_measure(four_corner_maps(), 5).support_points();
  const std::vector<Point> sample(pts.begin(), pts.begin() + state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_distinct_directions(sample));
}
BENCHMARK(BM_DirectionSet)->Arg(256)->Arg(1024);
