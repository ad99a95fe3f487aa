#pragma once

#include <cstdint>
#include <vector>

#include "wartem/rng.hpp"
#include "wartem/series.hpp"

namespace wartem {

enum class WarpDirection { Left, Right };

/// Copy warps duplicate an endpoint (plateau); interpolation warps insert a
/// midpoint (slope). Mixed draws one of the two per focus window.
enum class WarpFamily { Copy, Interpolation, Mixed };

// Single-window operators. The focus window is values[w .. w+4); everything
// outside it passes through untouched.
//   lcw: [p1, p2, p3, p4] -> [p1, p3, p4, p4]
//   rcw: [p1, p2, p3, p4] -> [p1, p1, p2, p4]
//   liw: [p1, p2, p3, p4] -> [p1, p3, (p3+p4)/2, p4]
//   riw: [p1, p2, p3, p4] -> [p1, (p1+p2)/2, p2, p4]
TimeSeries lcw(const TimeSeries& t, int w);
TimeSeries rcw(const TimeSeries& t, int w);
TimeSeries liw(const TimeSeries& t, int w);
TimeSeries riw(const TimeSeries& t, int w);

/// One warp with the family pinned to copy (false) or interpolation (true).
TimeSeries warp_once(const TimeSeries& t, WarpDirection dir, bool interpolate, int w);

/// Applies a random number of single-window warps, each to the output of the
/// previous one. Draw order: warp count r uniform on {0, ..., floor(m/2)},
/// then per warp a window start uniform on {0, ..., m-4} followed by the
/// family coin when fam is Mixed.
TimeSeries generate_warped_variant(const TimeSeries& t, WarpDirection dir, WarpFamily fam,
                                   Engine& rng);

/// Same, with the warp count forced instead of drawn.
TimeSeries generate_warped_variant(const TimeSeries& t, WarpDirection dir, WarpFamily fam,
                                   int warp_count, Engine& rng);

/// Ordered input pair for the twin autoencoder. The left entry is a
/// left-warped variant or the original series, never a right-warped one, and
/// mirrored for the right entry.
struct TrainingPair {
  TimeSeries left_input;
  TimeSeries right_input;
  int source_index = 0;
};

/// Two pairs per series, [L(T), T] and [T, R(T)], shuffled. Series i draws
/// from child stream mix_seed(seed, i), so generation can be parallelized
/// across series without changing the result.
std::vector<TrainingPair> make_training_pairs(const std::vector<TimeSeries>& series,
                                              WarpFamily fam, std::uint64_t seed);

}  // namespace wartem
