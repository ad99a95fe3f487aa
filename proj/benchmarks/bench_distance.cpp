#include <benchmark/benchmark.h>

#include <vector>

#include "wartem/distance.hpp"
#include "wartem/rng.hpp"

namespace {

std::vector<double> random_series(int m, std::uint64_t seed) {
  wartem::Engine rng(seed);
  std::vector<double> t(static_cast<std::size_t>(m));
  for (auto& v : t) v = rng.normal();
  return t;
}

void DtwUnconstrained(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto a = random_series(m, 1);
  const auto b = random_series(m, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wartem::dtw_distance(a, b));
  }
  state.SetComplexityN(m);
}
BENCHMARK(DtwUnconstrained)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void DtwBanded(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto a = random_series(m, 3);
  const auto b = random_series(m, 4);
  const int band = m / 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wartem::dtw_distance(a, b, band));
  }
  state.SetComplexityN(m);
}
BENCHMARK(DtwBanded)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void SquaredEuclidean(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto a = random_series(m, 5);
  const auto b = random_series(m, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wartem::squared_euclidean(a, b));
  }
}
BENCHMARK(SquaredEuclidean)->RangeMultiplier(4)->Range(64, 4096);

void DistanceMatrixDtw(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  std::vector<std::vector<double>> points;
  for (int i = 0; i < count; ++i) points.push_back(random_series(128, 100 + i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wartem::distance_matrix(points, points, wartem::DistanceKind::dtw()));
  }
}
BENCHMARK(DistanceMatrixDtw)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
