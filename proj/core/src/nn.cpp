#include "wartem/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wartem/rng.hpp"

namespace wartem {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

void check_conv_spec(const Conv1d& spec) {
  if (spec.in_ch < 1 || spec.out_ch < 1) {
    throw std::invalid_argument("conv1d: channel counts must be >= 1");
  }
  if (spec.kernel < 1 || spec.kernel % 2 == 0) {
    throw std::invalid_argument("conv1d: kernel must be odd and >= 1, got " +
                                std::to_string(spec.kernel));
  }
}

void check_dense_spec(const Dense& spec) {
  if (spec.in < 1 || spec.out < 1) throw std::invalid_argument("dense: sizes must be >= 1");
  if (spec.out_channels < 1 || spec.out % spec.out_channels != 0) {
    throw std::invalid_argument("dense: out (" + std::to_string(spec.out) +
                                ") must be divisible by out_channels (" +
                                std::to_string(spec.out_channels) + ")");
  }
}

}  // namespace

int layer_param_count(const LayerSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Conv1d>) {
          return s.out_ch * s.in_ch * s.kernel + s.out_ch;
        } else if constexpr (std::is_same_v<T, Dense>) {
          return s.out * s.in + s.out;
        } else {
          return 0;
        }
      },
      spec);
}

Shape layer_output_shape(const LayerSpec& spec, Shape in) {
  return std::visit(
      [in](const auto& s) -> Shape {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Conv1d>) {
          check_conv_spec(s);
          if (in.channels != s.in_ch) {
            throw std::invalid_argument("conv1d: expected " + std::to_string(s.in_ch) +
                                        " input channels, got " + std::to_string(in.channels));
          }
          return {s.out_ch, in.length};
        } else if constexpr (std::is_same_v<T, MaxPool1d>) {
          if (s.size < 2) throw std::invalid_argument("maxpool1d: size must be >= 2");
          return {in.channels, ceil_div(in.length, s.size)};
        } else if constexpr (std::is_same_v<T, Upsample1d>) {
          if (s.factor < 2) throw std::invalid_argument("upsample1d: factor must be >= 2");
          return {in.channels, in.length * s.factor};
        } else if constexpr (std::is_same_v<T, Dense>) {
          check_dense_spec(s);
          if (in.channels * in.length != s.in) {
            throw std::invalid_argument("dense: expected flattened input of " +
                                        std::to_string(s.in) + ", got " +
                                        std::to_string(in.channels * in.length));
          }
          return {s.out_channels, s.out / s.out_channels};
        } else {
          return in;
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Layer forward/backward
// ---------------------------------------------------------------------------

Tensor conv1d_forward(const Tensor& x, const Conv1d& spec, std::span<const double> params) {
  check_conv_spec(spec);
  if (x.rows != spec.in_ch) {
    throw std::invalid_argument("conv1d: expected " + std::to_string(spec.in_ch) +
                                " input channels, got " + std::to_string(x.rows));
  }
  const int length = x.cols;
  const int pad = (spec.kernel - 1) / 2;
  const double* weights = params.data();
  const double* bias = params.data() + spec.out_ch * spec.in_ch * spec.kernel;

  Tensor out(spec.out_ch, length);
  for (int o = 0; o < spec.out_ch; ++o) {
    for (int t = 0; t < length; ++t) {
      double acc = bias[o];
      for (int c = 0; c < spec.in_ch; ++c) {
        const double* wrow = weights + (o * spec.in_ch + c) * spec.kernel;
        const double* xrow = x.data.data() + static_cast<std::size_t>(c) * length;
        const int klo = std::max(0, pad - t);
        const int khi = std::min(spec.kernel, length + pad - t);
        for (int k = klo; k < khi; ++k) acc += wrow[k] * xrow[t + k - pad];
      }
      out.at(o, t) = acc;
    }
  }
  return out;
}

Tensor conv1d_backward(const Tensor& x, const Conv1d& spec, std::span<const double> params,
                       const Tensor& grad_out, std::span<double> param_grads) {
  const int length = x.cols;
  const int pad = (spec.kernel - 1) / 2;
  const double* weights = params.data();
  double* grad_weights = param_grads.data();
  double* grad_bias = param_grads.data() + spec.out_ch * spec.in_ch * spec.kernel;

  Tensor grad_in(spec.in_ch, length);
  for (int o = 0; o < spec.out_ch; ++o) {
    const double* grow = grad_out.data.data() + static_cast<std::size_t>(o) * length;
    for (int t = 0; t < length; ++t) grad_bias[o] += grow[t];
    for (int c = 0; c < spec.in_ch; ++c) {
      const double* wrow = weights + (o * spec.in_ch + c) * spec.kernel;
      double* gwrow = grad_weights + (o * spec.in_ch + c) * spec.kernel;
      const double* xrow = x.data.data() + static_cast<std::size_t>(c) * length;
      double* girow = grad_in.data.data() + static_cast<std::size_t>(c) * length;
      for (int t = 0; t < length; ++t) {
        const double g = grow[t];
        const int klo = std::max(0, pad - t);
        const int khi = std::min(spec.kernel, length + pad - t);
        for (int k = klo; k < khi; ++k) {
          gwrow[k] += g * xrow[t + k - pad];
          girow[t + k - pad] += g * wrow[k];
        }
      }
    }
  }
  return grad_in;
}

Tensor maxpool1d_forward(const Tensor& x, int size, std::vector<int>& argmax) {
  if (size < 2) throw std::invalid_argument("maxpool1d: size must be >= 2");
  const int length = x.cols;
  const int out_len = ceil_div(length, size);
  Tensor out(x.rows, out_len);
  argmax.assign(static_cast<std::size_t>(out.size()), 0);
  for (int c = 0; c < x.rows; ++c) {
    for (int ow = 0; ow < out_len; ++ow) {
      const int lo = ow * size;
      const int hi = std::min(length, lo + size);
      int best_idx = lo;
      double best = x.at(c, lo);
      for (int j = lo + 1; j < hi; ++j) {
        if (x.at(c, j) > best) {  // strict: ties keep the earliest index
          best = x.at(c, j);
          best_idx = j;
        }
      }
      out.at(c, ow) = best;
      argmax[static_cast<std::size_t>(c) * out_len + ow] = c * length + best_idx;
    }
  }
  return out;
}

Tensor maxpool1d_backward(const Tensor& x, int size, const std::vector<int>& argmax,
                          const Tensor& grad_out) {
  (void)size;
  Tensor grad_in(x.rows, x.cols);
  for (std::size_t i = 0; i < argmax.size(); ++i) {
    grad_in.data[static_cast<std::size_t>(argmax[i])] += grad_out.data[i];
  }
  return grad_in;
}

Tensor upsample1d_forward(const Tensor& x, int factor) {
  if (factor < 2) throw std::invalid_argument("upsample1d: factor must be >= 2");
  Tensor out(x.rows, x.cols * factor);
  for (int c = 0; c < x.rows; ++c) {
    for (int t = 0; t < out.cols; ++t) out.at(c, t) = x.at(c, t / factor);
  }
  return out;
}

Tensor upsample1d_backward(const Tensor& x, int factor, const Tensor& grad_out) {
  Tensor grad_in(x.rows, x.cols);
  for (int c = 0; c < x.rows; ++c) {
    for (int t = 0; t < grad_out.cols; ++t) grad_in.at(c, t / factor) += grad_out.at(c, t);
  }
  return grad_in;
}

Tensor dense_forward(const Tensor& x, const Dense& spec, std::span<const double> params) {
  check_dense_spec(spec);
  if (x.size() != spec.in) {
    throw std::invalid_argument("dense: expected flattened input of " + std::to_string(spec.in) +
                                ", got " + std::to_string(x.size()));
  }
  const double* weights = params.data();
  const double* bias = params.data() + spec.out * spec.in;
  Tensor out(spec.out_channels, spec.out / spec.out_channels);
  for (int o = 0; o < spec.out; ++o) {
    const double* wrow = weights + static_cast<std::size_t>(o) * spec.in;
    double acc = bias[o];
    for (int i = 0; i < spec.in; ++i) acc += wrow[i] * x.data[static_cast<std::size_t>(i)];
    out.data[static_cast<std::size_t>(o)] = acc;
  }
  return out;
}

Tensor dense_backward(const Tensor& x, const Dense& spec, std::span<const double> params,
                      const Tensor& grad_out, std::span<double> param_grads) {
  const double* weights = params.data();
  double* grad_weights = param_grads.data();
  double* grad_bias = param_grads.data() + spec.out * spec.in;

  Tensor grad_in(x.rows, x.cols);
  for (int o = 0; o < spec.out; ++o) {
    const double g = grad_out.data[static_cast<std::size_t>(o)];
    grad_bias[o] += g;
    const double* wrow = weights + static_cast<std::size_t>(o) * spec.in;
    double* gwrow = grad_weights + static_cast<std::size_t>(o) * spec.in;
    for (int i = 0; i < spec.in; ++i) {
      gwrow[i] += g * x.data[static_cast<std::size_t>(i)];
      grad_in.data[static_cast<std::size_t>(i)] += g * wrow[i];
    }
  }
  return grad_in;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i) out.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  Tensor grad_in(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    grad_in.data[i] = x.data[i] > 0.0 ? grad_out.data[i] : 0.0;
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

double mse_loss(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target)) throw std::invalid_argument("mse: shape mismatch");
  if (pred.size() == 0) throw std::invalid_argument("mse: empty tensors");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

Tensor mse_loss_grad(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target)) throw std::invalid_argument("mse: shape mismatch");
  Tensor grad(pred.rows, pred.cols);
  const double scale = 2.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    grad.data[i] = scale * (pred.data[i] - target.data[i]);
  }
  return grad;
}

double softmax_cross_entropy(std::span<const double> logits, int label) {
  if (logits.empty()) throw std::invalid_argument("cross entropy: empty logits");
  if (label < 0 || label >= static_cast<int>(logits.size())) {
    throw std::invalid_argument("cross entropy: label " + std::to_string(label) +
                                " outside [0, " + std::to_string(logits.size()) + ")");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double z : logits) sum += std::exp(z - max_logit);
  return std::log(sum) - (logits[static_cast<std::size_t>(label)] - max_logit);
}

std::vector<double> softmax_cross_entropy_grad(std::span<const double> logits, int label) {
  if (label < 0 || label >= static_cast<int>(logits.size())) {
    throw std::invalid_argument("cross entropy: label out of range");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> grad(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = std::exp(logits[i] - max_logit);
    sum += grad[i];
  }
  for (auto& g : grad) g /= sum;
  grad[static_cast<std::size_t>(label)] -= 1.0;
  return grad;
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

Network::Network(std::vector<LayerSpec> specs, Shape input_shape)
    : specs_(std::move(specs)), input_shape_(input_shape) {
  offsets_.reserve(specs_.size() + 1);
  int total = 0;
  Shape shape = input_shape_;
  for (const auto& spec : specs_) {
    offsets_.push_back(total);
    total += layer_param_count(spec);
    shape = layer_output_shape(spec, shape);  // validates the chain
  }
  offsets_.push_back(total);
  params_.assign(static_cast<std::size_t>(total), 0.0);
  output_shape_ = shape;
}

std::span<double> Network::layer_params(int layer) {
  return std::span<double>(params_).subspan(
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer)]),
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer) + 1] -
                               offsets_[static_cast<std::size_t>(layer)]));
}

std::span<const double> Network::layer_params(int layer) const {
  return std::span<const double>(params_).subspan(
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer)]),
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer) + 1] -
                               offsets_[static_cast<std::size_t>(layer)]));
}

std::span<double> Network::layer_grads(std::span<double> grads, int layer) const {
  return grads.subspan(
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer)]),
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(layer) + 1] -
                               offsets_[static_cast<std::size_t>(layer)]));
}

void Network::init_params(std::uint64_t seed) {
  Engine rng(seed);
  for (std::size_t layer = 0; layer < specs_.size(); ++layer) {
    auto slice = layer_params(static_cast<int>(layer));
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            const double bound = std::sqrt(6.0 / (s.in_ch * s.kernel + s.out_ch * s.kernel));
            for (auto& p : slice) p = rng.uniform_real(-bound, bound);
          } else if constexpr (std::is_same_v<T, Dense>) {
            const double bound = std::sqrt(6.0 / (s.in + s.out));
            for (auto& p : slice) p = rng.uniform_real(-bound, bound);
          }
        },
        specs_[layer]);
  }
}

Tensor Network::forward(const Tensor& x) const {
  Tape tape;
  return forward(x, tape);
}

Tensor Network::forward(const Tensor& x, Tape& tape) const {
  if (x.rows != input_shape_.channels || x.cols != input_shape_.length) {
    throw std::invalid_argument("network: expected input (" +
                                std::to_string(input_shape_.channels) + ", " +
                                std::to_string(input_shape_.length) + "), got (" +
                                std::to_string(x.rows) + ", " + std::to_string(x.cols) + ")");
  }
  tape.inputs.clear();
  tape.pool_argmax.assign(specs_.size(), {});
  tape.consumed = false;

  Tensor cur = x;
  for (std::size_t layer = 0; layer < specs_.size(); ++layer) {
    tape.inputs.push_back(cur);
    const auto slice = layer_params(static_cast<int>(layer));
    cur = std::visit(
        [&](const auto& s) -> Tensor {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            return conv1d_forward(tape.inputs.back(), s, slice);
          } else if constexpr (std::is_same_v<T, MaxPool1d>) {
            return maxpool1d_forward(tape.inputs.back(), s.size, tape.pool_argmax[layer]);
          } else if constexpr (std::is_same_v<T, Upsample1d>) {
            return upsample1d_forward(tape.inputs.back(), s.factor);
          } else if constexpr (std::is_same_v<T, Dense>) {
            return dense_forward(tape.inputs.back(), s, slice);
          } else if constexpr (std::is_same_v<T, Relu>) {
            return relu_forward(tape.inputs.back());
          } else {
            return tape.inputs.back();
          }
        },
        specs_[layer]);
  }
  return cur;
}

Tensor Network::backward(const Tensor& grad_out, Tape& tape, std::span<double> param_grads) const {
  if (tape.consumed) throw std::logic_error("gradient tape already consumed");
  if (tape.inputs.size() != specs_.size()) {
    throw std::logic_error("gradient tape does not match this network");
  }
  if (param_grads.size() != params_.size()) {
    throw std::invalid_argument("backward: gradient buffer has wrong size");
  }

  Tensor grad = grad_out;
  for (int layer = static_cast<int>(specs_.size()) - 1; layer >= 0; --layer) {
    const auto slice = layer_params(layer);
    auto grad_slice = layer_grads(param_grads, layer);
    const Tensor& input = tape.inputs[static_cast<std::size_t>(layer)];
    grad = std::visit(
        [&](const auto& s) -> Tensor {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            return conv1d_backward(input, s, slice, grad, grad_slice);
          } else if constexpr (std::is_same_v<T, MaxPool1d>) {
            return maxpool1d_backward(input, s.size,
                                      tape.pool_argmax[static_cast<std::size_t>(layer)], grad);
          } else if constexpr (std::is_same_v<T, Upsample1d>) {
            return upsample1d_backward(input, s.factor, grad);
          } else if constexpr (std::is_same_v<T, Dense>) {
            return dense_backward(input, s, slice, grad, grad_slice);
          } else if constexpr (std::is_same_v<T, Relu>) {
            return relu_backward(input, grad);
          } else {
            return grad;
          }
        },
        specs_[static_cast<std::size_t>(layer)]);
  }
  tape.consumed = true;
  return grad;
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

AdamState::AdamState(int param_count, AdamConfig config)
    : config_(config),
      m_(static_cast<std::size_t>(param_count), 0.0),
      v_(static_cast<std::size_t>(param_count), 0.0) {}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("adam: parameter/gradient size mismatch");
  }
  ++t_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i] * grads[i];
    const double m_hat = m_[i] / bias1;
    const double v_hat = v_[i] / bias2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_relative_error: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max(1e-12, std::abs(a[i]) + std::abs(b[i]));
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

double gradient_check(std::span<double> params, std::span<const double> analytic,
                      const std::function<double()>& loss, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gradient check: epsilon must be positive");
  if (params.size() != analytic.size()) {
    throw std::invalid_argument("gradient check: parameter/gradient size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + epsilon;
    const double up = loss();
    params[i] = saved - epsilon;
    const double down = loss();
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double denom = std::max(1e-12, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

double gradient_check(Network& net, const Tensor& input, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gradient check: epsilon must be positive");
  const Shape out_shape = net.output_shape();
  const Tensor target(out_shape.channels, out_shape.length);

  Tape tape;
  const Tensor out = net.forward(input, tape);
  std::vector<double> analytic(static_cast<std::size_t>(net.param_count()), 0.0);
  net.backward(mse_loss_grad(out, target), tape, analytic);

  const auto loss = [&net, &input, &target] { return mse_loss(net.forward(input), target); };
  return gradient_check(net.params(), analytic, loss, epsilon);
}

}  // namespace wartem
