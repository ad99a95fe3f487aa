#include <benchmark/benchmark.h>

#include <vector>

#include "wartem/rng.hpp"
#include "wartem/warping.hpp"

namespace {

std::vector<double> random_series(int m, std::uint64_t seed) {
  wartem::Engine rng(seed);
  std::vector<double> t(static_cast<std::size_t>(m));
  for (auto& v : t) v = rng.normal();
  return t;
}

void SingleWarp(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto t = random_series(m, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wartem::lcw(t, m / 2));
  }
}
BENCHMARK(SingleWarp)->RangeMultiplier(4)->Range(64, 4096);

void WarpedVariant(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto t = random_series(m, 2);
  wartem::Engine rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wartem::generate_warped_variant(t, wartem::WarpDirection::Left, wartem::WarpFamily::Mixed, rng));
  }
}
BENCHMARK(WarpedVariant)->RangeMultiplier(2)->Range(64, 1024);

void TrainingPairs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<double>> series;
  for (int i = 0; i < n; ++i) series.push_back(random_series(128, 10 + i));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wartem::make_training_pairs(series, wartem::WarpFamily::Mixed, seed++));
  }
}
BENCHMARK(TrainingPairs)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
