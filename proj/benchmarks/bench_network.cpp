#include <benchmark/benchmark.h>

#include <vector>

#include "wartem/rng.hpp"
#include "wartem/twin.hpp"
#include "wartem/warping.hpp"

namespace {

wartem::TrainingPair random_pair(int m, std::uint64_t seed) {
  wartem::Engine rng(seed);
  wartem::TrainingPair pair;
  pair.left_input.resize(static_cast<std::size_t>(m));
  pair.right_input.resize(static_cast<std::size_t>(m));
  for (auto& v : pair.left_input) v = rng.normal();
  for (auto& v : pair.right_input) v = rng.normal();
  return pair;
}

wartem::AEConfig config_for(int m) {
  wartem::AEConfig config;
  config.input_length = m;
  return config;
}

void TwinForward(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const wartem::TwinAE twin(config_for(m), 1);
  const auto pair = random_pair(m, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wartem::twin_forward(twin, pair).total);
  }
}
BENCHMARK(TwinForward)->Arg(64)->Arg(128)->Arg(256);

void TwinForwardBackward(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const wartem::TwinAE twin(config_for(m), 3);
  const auto pair = random_pair(m, 4);
  for (auto _ : state) {
    wartem::TwinTape tape;
    wartem::twin_forward(twin, pair, tape);
    benchmark::DoNotOptimize(wartem::twin_backward(twin, tape));
  }
}
BENCHMARK(TwinForwardBackward)->Arg(64)->Arg(128)->Arg(256);

void Embed(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const wartem::TwinAE twin(config_for(m), 5);
  const auto pair = random_pair(m, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(twin.embed(pair.left_input));
  }
}
BENCHMARK(Embed)->Arg(64)->Arg(128)->Arg(256);

}  // namespace
