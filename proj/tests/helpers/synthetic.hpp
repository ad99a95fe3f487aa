#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "wartem/rng.hpp"
#include "wartem/series.hpp"
#include "wartem/warping.hpp"

namespace testutil {

// Random smooth series: a few low-frequency sine components.
inline std::vector<double> smooth_series(int m, wartem::Engine& rng) {
  std::vector<double> t(static_cast<std::size_t>(m), 0.0);
  for (int k = 1; k <= 3; ++k) {
    const double amplitude = rng.uniform_real(0.5, 1.0);
    const double phase = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < m; ++i) {
      t[static_cast<std::size_t>(i)] +=
          amplitude * std::sin(2.0 * std::numbers::pi * k * i / m + phase);
    }
  }
  return t;
}

inline std::vector<double> multi_bump(int m, double width, const std::vector<double>& heights) {
  std::vector<double> t(static_cast<std::size_t>(m), 0.0);
  const int bumps = static_cast<int>(heights.size());
  for (int b = 0; b < bumps; ++b) {
    const double center = (b + 1) * m / static_cast<double>(bumps + 1);
    for (int i = 0; i < m; ++i) {
      const double z = (i - center) / width;
      t[static_cast<std::size_t>(i)] += heights[static_cast<std::size_t>(b)] * std::exp(-z * z);
    }
  }
  return t;
}

// Two-class benchmark built to punish the plain euclidean distance: both
// classes carry four narrow bumps at the same positions with the same total
// energy, differing only in which bumps are tall. Copy warps jitter the bump
// positions enough that raw 1-NN cross-matches the classes, while the
// tall/short pattern itself survives warping. Classes alternate by index.
inline wartem::LabeledDataset make_warped_two_class(int per_class, int m, int max_warps,
                                                    std::uint64_t seed) {
  using namespace wartem;
  const double width = m / 36.0;
  const double short_h = 0.8;
  const std::vector<double> base0 = multi_bump(m, width, {1.0, short_h, 1.0, short_h});
  const std::vector<double> base1 = multi_bump(m, width, {short_h, 1.0, short_h, 1.0});

  LabeledDataset dataset;
  dataset.length = m;
  dataset.class_count = 2;
  for (int i = 0; i < 2 * per_class; ++i) {
    const int label = i % 2;
    Engine rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const int warps = rng.uniform_int(0, max_warps);
    const WarpDirection direction =
        rng.uniform_int(0, 1) == 0 ? WarpDirection::Left : WarpDirection::Right;
    const auto& base = label == 0 ? base0 : base1;
    dataset.series.push_back(
        generate_warped_variant(base, direction, WarpFamily::Copy, warps, rng));
    dataset.labels.push_back(label);
    dataset.original_labels.push_back(label);
  }
  return dataset;
}

}  // namespace testutil
