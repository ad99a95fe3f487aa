#include "wartem/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wartem/parallel.hpp"

namespace wartem {

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("squared_euclidean: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean(a, b));
}

double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::optional<int> band) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n < 1 || m < 1) throw std::invalid_argument("dtw: both series must be non-empty");
  if (band) {
    if (*band < 0) throw std::invalid_argument("dtw: band must be non-negative");
    if (*band >= std::max(n, m)) {
      throw std::invalid_argument("dtw: band " + std::to_string(*band) +
                                  " must be < max series length " +
                                  std::to_string(std::max(n, m)));
    }
    if (*band < std::abs(n - m)) {
      throw std::invalid_argument("dtw: band " + std::to_string(*band) +
                                  " cannot align lengths " + std::to_string(n) + " and " +
                                  std::to_string(m));
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(static_cast<std::size_t>(m), inf);
  std::vector<double> cur(static_cast<std::size_t>(m), inf);

  for (int i = 0; i < n; ++i) {
    int jlo = 0;
    int jhi = m - 1;
    if (band) {
      jlo = std::max(0, i - *band);
      jhi = std::min(m - 1, i + *band);
    }
    std::fill(cur.begin(), cur.end(), inf);
    for (int j = jlo; j <= jhi; ++j) {
      const double diff = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)];
      const double cost = diff * diff;
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[static_cast<std::size_t>(j)]);
        if (j > 0) best = std::min(best, cur[static_cast<std::size_t>(j - 1)]);
        if (i > 0 && j > 0) best = std::min(best, prev[static_cast<std::size_t>(j - 1)]);
      }
      cur[static_cast<std::size_t>(j)] = cost + best;
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

double distance(std::span<const double> a, std::span<const double> b, const DistanceKind& kind) {
  switch (kind.type) {
    case DistanceKind::Type::SquaredEuclidean:
      return squared_euclidean(a, b);
    case DistanceKind::Type::Euclidean:
      return euclidean_distance(a, b);
    case DistanceKind::Type::DTW:
      return dtw_distance(a, b, kind.band);
  }
  throw std::logic_error("unreachable distance kind");
}

std::vector<std::vector<double>> distance_matrix(const std::vector<std::vector<double>>& queries,
                                                 const std::vector<std::vector<double>>& refs,
                                                 const DistanceKind& kind) {
  std::vector<std::vector<double>> matrix(queries.size(),
                                          std::vector<double>(refs.size(), 0.0));
  parallel_for(0, static_cast<int>(queries.size()), [&](int i) {
    auto& row = matrix[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < refs.size(); ++j) {
      row[j] = distance(queries[static_cast<std::size_t>(i)], refs[j], kind);
    }
  });
  return matrix;
}

NNResult one_nn_accuracy(const std::vector<std::vector<double>>& train,
                         const std::vector<int>& train_labels,
                         const std::vector<std::vector<double>>& test,
                         const std::vector<int>& test_labels, const DistanceKind& kind) {
  if (train.empty()) throw std::invalid_argument("1-NN: training set must be non-empty");
  if (train.size() != train_labels.size() || test.size() != test_labels.size()) {
    throw std::invalid_argument("1-NN: vectors and labels must have matching counts");
  }

  NNResult result;
  result.predicted_labels.assign(test.size(), 0);
  parallel_for(0, static_cast<int>(test.size()), [&](int i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < train.size(); ++j) {
      const double d = distance(test[static_cast<std::size_t>(i)], train[j], kind);
      if (d < best) {
        best = d;
        best_idx = j;
      }
    }
    result.predicted_labels[static_cast<std::size_t>(i)] = train_labels[best_idx];
  });

  long long correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (result.predicted_labels[i] == test_labels[i]) ++correct;
  }
  result.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  result.distance_evaluations =
      static_cast<long long>(train.size()) * static_cast<long long>(test.size());
  return result;
}

}  // namespace wartem
