#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "wartem/tensor.hpp"

namespace wartem {

// ---------------------------------------------------------------------------
// Layer vocabulary
// ---------------------------------------------------------------------------

/// 1-d convolution with zero "same" padding of (kernel-1)/2 on both sides,
/// so the sequence length is preserved. Kernel must be odd.
struct Conv1d {
  int in_ch = 1;
  int out_ch = 1;
  int kernel = 3;
};

/// Window maxima over non-overlapping windows; the final window may be
/// partial. Output length is ceil(L / size).
struct MaxPool1d {
  int size = 2;
};

/// Nearest-neighbor repetition: out[c, t] = x[c, floor(t / factor)].
struct Upsample1d {
  int factor = 2;
};

/// Fully connected layer on the flattened input. The output is viewed as
/// (out_channels, out / out_channels) so a decoder can feed it to
/// channel-wise layers without a separate reshape step.
struct Dense {
  int in = 1;
  int out = 1;
  int out_channels = 1;
};

struct Relu {};
struct Identity {};

using LayerSpec = std::variant<Conv1d, MaxPool1d, Upsample1d, Dense, Relu, Identity>;

struct Shape {
  int channels = 1;
  int length = 1;
};

int layer_param_count(const LayerSpec& spec);
Shape layer_output_shape(const LayerSpec& spec, Shape in);

// ---------------------------------------------------------------------------
// Single-layer forward/backward. Parameters are flattened weights followed by
// biases. Backward functions accumulate (+=) into param_grads and return the
// gradient with respect to the layer input.
// ---------------------------------------------------------------------------

Tensor conv1d_forward(const Tensor& x, const Conv1d& spec, std::span<const double> params);
Tensor conv1d_backward(const Tensor& x, const Conv1d& spec, std::span<const double> params,
                       const Tensor& grad_out, std::span<double> param_grads);

Tensor maxpool1d_forward(const Tensor& x, int size, std::vector<int>& argmax);
Tensor maxpool1d_backward(const Tensor& x, int size, const std::vector<int>& argmax,
                          const Tensor& grad_out);

Tensor upsample1d_forward(const Tensor& x, int factor);
Tensor upsample1d_backward(const Tensor& x, int factor, const Tensor& grad_out);

Tensor dense_forward(const Tensor& x, const Dense& spec, std::span<const double> params);
Tensor dense_backward(const Tensor& x, const Dense& spec, std::span<const double> params,
                      const Tensor& grad_out, std::span<double> param_grads);

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// Mean over all elements of (pred - target)^2.
double mse_loss(const Tensor& pred, const Tensor& target);
Tensor mse_loss_grad(const Tensor& pred, const Tensor& target);

/// -log softmax(logits)[label], computed with max subtraction.
double softmax_cross_entropy(std::span<const double> logits, int label);
std::vector<double> softmax_cross_entropy_grad(std::span<const double> logits, int label);

// ---------------------------------------------------------------------------
// Network: a layer stack over one flat parameter vector
// ---------------------------------------------------------------------------

/// Cached forward activations for one backward pass. A tape may be consumed
/// exactly once; reuse is a state error.
struct Tape {
  std::vector<Tensor> inputs;
  std::vector<std::vector<int>> pool_argmax;
  bool consumed = false;
};

class Network {
 public:
  Network() = default;
  Network(std::vector<LayerSpec> specs, Shape input_shape);

  /// All parameters uniform on +-sqrt(6 / (fan_in + fan_out)). Biases share
  /// the weight range so no pre-activation starts exactly on a relu kink.
  void init_params(std::uint64_t seed);

  Tensor forward(const Tensor& x) const;
  Tensor forward(const Tensor& x, Tape& tape) const;

  /// Accumulates parameter gradients into param_grads (sized param_count())
  /// and returns the gradient with respect to the network input.
  Tensor backward(const Tensor& grad_out, Tape& tape, std::span<double> param_grads) const;

  int param_count() const { return static_cast<int>(params_.size()); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  Shape input_shape() const { return input_shape_; }
  Shape output_shape() const { return output_shape_; }
  const std::vector<LayerSpec>& specs() const { return specs_; }

 private:
  std::span<double> layer_params(int layer);
  std::span<const double> layer_params(int layer) const;
  std::span<double> layer_grads(std::span<double> grads, int layer) const;

  std::vector<LayerSpec> specs_;
  std::vector<int> offsets_;  // per-layer parameter offset; offsets_.back() = total
  std::vector<double> params_;
  Shape input_shape_{};
  Shape output_shape_{};
};

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(int param_count, AdamConfig config);

  /// One bias-corrected update step. Deterministic.
  void step(std::span<double> params, std::span<const double> grads);

  long step_count() const { return t_; }

 private:
  AdamConfig config_{};
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

/// max_i |a_i - b_i| / max(1e-12, |a_i| + |b_i|)
double max_relative_error(std::span<const double> a, std::span<const double> b);

/// Central-difference check of `analytic` against the scalar functional
/// `loss`, perturbing each parameter by +-epsilon in place (and restoring it).
double gradient_check(std::span<double> params, std::span<const double> analytic,
                      const std::function<double()>& loss, double epsilon);

/// Convenience: checks every parameter of `net` against finite differences of
/// mse(net(input), 0).
double gradient_check(Network& net, const Tensor& input, double epsilon);

}  // namespace wartem
