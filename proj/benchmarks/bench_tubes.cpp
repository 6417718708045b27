#include <benchmark/benchmark.h>

#include "radial/blinds.hpp"
#include "radial/measure.hpp"
#include "radial/tubes.hpp"

using namespace radial;

static void BM_BestTubeCover(benchmark::State& state) {
  const auto k = build_ifs_measure(four_corner_maps(), 5);
  const Point x{-0.3, 0.4, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(best_tube_cover(k, x, 1.0 / 64, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BestTubeCover)->Arg(1)->Arg(4);

static void BM_AnalyzeLevel(benchmark::State& state) {
  TubeParams p;
  p.delta = 1.0 / 64.0;
  p.tau = 0.3;
  p.eta = 0.03;
  p.kappa_mu = 1.6;
  p.kappa_nu = 1.0;
  const auto k = line_measure(Line::through({0.3, 0.45, 0.0}, {0.7, 0.55, 0.0}), 9);
  const auto e = build_ifs_measure(four_corner_maps(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_level(k, e, p));
}
BENCHMARK(BM_AnalyzeLevel)->Unit(benchmark::kMillisecond);

static void BM_BlindConstruct(benchmark::State& state) {
  const std::vector<Point> views{{0.5, 3.0, 0.0}, {-1.5, 1.2, 0.0}, {2.4, -0.8, 0.0}};
  for (auto _ : state)
    benchmark::DoNotOptimize(blind_construct(views, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BlindConstruct)->Arg(1)->Arg(2);
