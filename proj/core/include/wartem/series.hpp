#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wartem {

/// A univariate series of fixed length; values are unitless reals.
using TimeSeries = std::vector<double>;

/// Fixed-length labeled series collection. Immutable by convention once
/// loaded; safe to share across concurrent readers.
struct LabeledDataset {
  std::vector<TimeSeries> series;
  std::vector<int> labels;               ///< contiguous, 0 .. class_count-1
  std::vector<double> original_labels;   ///< labels as they appeared on disk
  int length = 0;                        ///< common series length m
  int class_count = 0;

  int size() const { return static_cast<int>(series.size()); }
};

/// Reads a tab-separated file: one record per line, class label first, then
/// the series values. Labels are remapped to contiguous integers in
/// first-occurrence order. Accepts LF and CRLF line endings.
LabeledDataset load_ucr_tsv(const std::string& path);

/// Writes the same format back. Values are rendered with 17 significant
/// digits so a load -> write -> load round trip is bit-exact.
void write_ucr_tsv(const std::string& path, const LabeledDataset& dataset);

/// Zero mean, unit population standard deviation. Inputs with standard
/// deviation below 1e-12 map to all zeros.
TimeSeries znormalize(const TimeSeries& t);
void znormalize(LabeledDataset& dataset);

/// Deterministic index partition: (kept, held_out) with held-out size
/// max(1, round(fraction * n)). Indices are sorted within each part.
std::pair<std::vector<int>, std::vector<int>> split_indices(int n, double fraction,
                                                            std::uint64_t seed);

/// Disjoint, exhaustive split of a dataset into (rest, held_out).
std::pair<LabeledDataset, LabeledDataset> holdout_split(const LabeledDataset& dataset,
                                                        double fraction, std::uint64_t seed);

}  // namespace wartem
