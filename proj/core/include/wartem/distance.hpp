#pragma once

#include <optional>
#include <span>
#include <vector>

namespace wartem {

struct DistanceKind {
  enum class Type { SquaredEuclidean, Euclidean, DTW };

  Type type = Type::SquaredEuclidean;
  std::optional<int> band{};  ///< Sakoe-Chiba half-width; DTW only

  static DistanceKind squared_euclidean() { return {Type::SquaredEuclidean, {}}; }
  static DistanceKind euclidean() { return {Type::Euclidean, {}}; }
  static DistanceKind dtw(std::optional<int> band = {}) { return {Type::DTW, band}; }
};

double squared_euclidean(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Minimum cumulative squared difference over monotone, contiguous,
/// boundary-anchored alignments (no final square root). An absent band means
/// unconstrained; a band restricts alignment cells to |i - j| <= band.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::optional<int> band = {});

double distance(std::span<const double> a, std::span<const double> b, const DistanceKind& kind);

/// Entry (i, j) = distance(queries[i], refs[j]). Rows are computed in
/// parallel; the result is identical for any worker count.
std::vector<std::vector<double>> distance_matrix(const std::vector<std::vector<double>>& queries,
                                                 const std::vector<std::vector<double>>& refs,
                                                 const DistanceKind& kind);

struct NNResult {
  std::vector<int> predicted_labels;
  double accuracy = 0.0;  ///< fraction in [0, 1]
  long long distance_evaluations = 0;
};

/// Each test point takes the label of its nearest training point; ties break
/// to the lowest training index.
NNResult one_nn_accuracy(const std::vector<std::vector<double>>& train,
                         const std::vector<int>& train_labels,
                         const std::vector<std::vector<double>>& test,
                         const std::vector<int>& test_labels, const DistanceKind& kind);

}  // namespace wartem
