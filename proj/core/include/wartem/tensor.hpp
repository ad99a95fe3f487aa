#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wartem {

namespace detail {
inline std::size_t checked_extent(int rows, int cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative tensor shape");
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}
}  // namespace detail

/// Dense row-major 2-d array of 64-bit reals. Rows are channels for sequence
/// data and output units for dense layers.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;

  Tensor(int r, int c) : rows(r), cols(c), data(detail::checked_extent(r, c), 0.0) {}

  Tensor(int r, int c, std::vector<double> values)
      : rows(r), cols(c), data(std::move(values)) {
    if (detail::checked_extent(r, c) != data.size()) {
      throw std::invalid_argument("tensor shape does not match value count");
    }
  }

  static Tensor from_series(const std::vector<double>& values) {
    return Tensor(1, static_cast<int>(values.size()), values);
  }

  int size() const { return rows * cols; }

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  bool same_shape(const Tensor& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

}  // namespace wartem
