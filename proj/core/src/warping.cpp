#include "wartem/warping.hpp"

#include <stdexcept>
#include <string>

namespace wartem {

namespace {

constexpr std::uint64_t kShuffleStream = ~std::uint64_t{0};

void check_window(const TimeSeries& t, int w) {
  const int m = static_cast<int>(t.size());
  if (m < 4) {
    throw std::invalid_argument("series too short to warp: need length >= 4, got " +
                                std::to_string(m));
  }
  if (w < 0 || w > m - 4) {
    throw std::out_of_range("warp window start " + std::to_string(w) + " outside [0, " +
                            std::to_string(m - 4) + "]");
  }
}

}  // namespace

TimeSeries lcw(const TimeSeries& t, int w) {
  check_window(t, w);
  TimeSeries out = t;
  out[w + 1] = t[w + 2];
  out[w + 2] = t[w + 3];
  out[w + 3] = t[w + 3];
  return out;
}

TimeSeries rcw(const TimeSeries& t, int w) {
  check_window(t, w);
  TimeSeries out = t;
  out[w + 1] = t[w];
  out[w + 2] = t[w + 1];
  out[w + 3] = t[w + 3];
  return out;
}

TimeSeries liw(const TimeSeries& t, int w) {
  check_window(t, w);
  TimeSeries out = t;
  out[w + 1] = t[w + 2];
  out[w + 2] = 0.5 * (t[w + 2] + t[w + 3]);
  out[w + 3] = t[w + 3];
  return out;
}

TimeSeries riw(const TimeSeries& t, int w) {
  check_window(t, w);
  TimeSeries out = t;
  out[w + 1] = 0.5 * (t[w] + t[w + 1]);
  out[w + 2] = t[w + 1];
  out[w + 3] = t[w + 3];
  return out;
}

TimeSeries warp_once(const TimeSeries& t, WarpDirection dir, bool interpolate, int w) {
  if (dir == WarpDirection::Left) return interpolate ? liw(t, w) : lcw(t, w);
  return interpolate ? riw(t, w) : rcw(t, w);
}

TimeSeries generate_warped_variant(const TimeSeries& t, WarpDirection dir, WarpFamily fam,
                                   Engine& rng) {
  const int m = static_cast<int>(t.size());
  if (m < 4) {
    throw std::invalid_argument("series too short to warp: need length >= 4, got " +
                                std::to_string(m));
  }
  const int warp_count = rng.uniform_int(0, m / 2);
  return generate_warped_variant(t, dir, fam, warp_count, rng);
}

TimeSeries generate_warped_variant(const TimeSeries& t, WarpDirection dir, WarpFamily fam,
                                   int warp_count, Engine& rng) {
  const int m = static_cast<int>(t.size());
  if (m < 4) {
    throw std::invalid_argument("series too short to warp: need length >= 4, got " +
                                std::to_string(m));
  }
  TimeSeries current = t;
  for (int i = 0; i < warp_count; ++i) {
    const int w = rng.uniform_int(0, m - 4);
    bool interpolate = fam == WarpFamily::Interpolation;
    if (fam == WarpFamily::Mixed) interpolate = rng.uniform_int(0, 1) == 1;
    current = warp_once(current, dir, interpolate, w);
  }
  return current;
}

std::vector<TrainingPair> make_training_pairs(const std::vector<TimeSeries>& series,
                                              WarpFamily fam, std::uint64_t seed) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(2 * series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    Engine child(mix_seed(seed, i));
    TrainingPair left_pair;
    left_pair.left_input = generate_warped_variant(series[i], WarpDirection::Left, fam, child);
    left_pair.right_input = series[i];
    left_pair.source_index = static_cast<int>(i);

    TrainingPair right_pair;
    right_pair.left_input = series[i];
    right_pair.right_input = generate_warped_variant(series[i], WarpDirection::Right, fam, child);
    right_pair.source_index = static_cast<int>(i);

    pairs.push_back(std::move(left_pair));
    pairs.push_back(std::move(right_pair));
  }
  Engine order(mix_seed(seed, kShuffleStream));
  order.shuffle(pairs);
  return pairs;
}

}  // namespace wartem
