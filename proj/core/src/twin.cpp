#include "wartem/twin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wartem/rng.hpp"

namespace wartem {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

void validate(const AEConfig& config) {
  if (config.input_length < 1) {
    throw std::invalid_argument("autoencoder config: input_length must be >= 1");
  }
  if (config.code_length < 0) {
    throw std::invalid_argument("autoencoder config: code_length must be >= 0");
  }
  if (config.pool_size < 2) {
    throw std::invalid_argument("autoencoder config: pool_size must be >= 2");
  }
  if (config.loss_weight_lambda < 0.0) {
    throw std::invalid_argument("autoencoder config: lambda must be >= 0");
  }
  for (const auto& block : config.conv_blocks) {
    if (block.filters < 1) throw std::invalid_argument("autoencoder config: filters must be >= 1");
    if (block.kernel < 1 || block.kernel % 2 == 0) {
      throw std::invalid_argument("autoencoder config: kernels must be odd, got " +
                                  std::to_string(block.kernel));
    }
  }
}

void push_activation(std::vector<LayerSpec>& specs, Activation activation) {
  if (activation == Activation::Relu) {
    specs.emplace_back(Relu{});
  } else {
    specs.emplace_back(Identity{});
  }
}

}  // namespace

int AEConfig::default_code_length(int input_length) {
  return std::max(1, static_cast<int>(std::lround(0.2 * input_length)));
}

int AEConfig::resolved_code_length() const {
  return code_length > 0 ? code_length : default_code_length(input_length);
}

std::vector<LayerSpec> encoder_specs(const AEConfig& config) {
  validate(config);
  std::vector<LayerSpec> specs;
  int channels = 1;
  int length = config.input_length;
  for (const auto& block : config.conv_blocks) {
    specs.emplace_back(Conv1d{channels, block.filters, block.kernel});
    push_activation(specs, config.activation);
    specs.emplace_back(MaxPool1d{config.pool_size});
    channels = block.filters;
    length = ceil_div(length, config.pool_size);
  }
  specs.emplace_back(Dense{channels * length, config.resolved_code_length(), 1});
  return specs;
}

std::vector<LayerSpec> decoder_specs(const AEConfig& config) {
  validate(config);
  const int code = config.resolved_code_length();
  std::vector<LayerSpec> specs;

  const int block_count = static_cast<int>(config.conv_blocks.size());
  if (block_count == 0) {
    specs.emplace_back(Dense{code, config.input_length, 1});
    return specs;
  }

  int length = config.input_length;
  for (int i = 0; i < block_count; ++i) length = ceil_div(length, config.pool_size);
  int channels = config.conv_blocks.back().filters;

  specs.emplace_back(Dense{code, channels * length, channels});
  push_activation(specs, config.activation);
  for (int i = block_count - 1; i >= 0; --i) {
    specs.emplace_back(Upsample1d{config.pool_size});
    const int out_channels = i > 0 ? config.conv_blocks[static_cast<std::size_t>(i - 1)].filters
                                   : config.conv_blocks.front().filters;
    specs.emplace_back(Conv1d{channels, out_channels,
                              config.conv_blocks[static_cast<std::size_t>(i)].kernel});
    push_activation(specs, config.activation);
    channels = out_channels;
  }
  specs.emplace_back(Conv1d{channels, 1, config.conv_blocks.front().kernel});  // linear output
  return specs;
}

TwinAE::TwinAE(AEConfig config, std::uint64_t seed) : config_(std::move(config)) {
  const auto enc = encoder_specs(config_);
  const auto dec = decoder_specs(config_);
  const Shape series_shape{1, config_.input_length};
  const Shape code_shape{1, config_.resolved_code_length()};

  left_encoder_ = Network(enc, series_shape);
  left_decoder_ = Network(dec, code_shape);
  right_encoder_ = Network(enc, series_shape);
  right_decoder_ = Network(dec, code_shape);

  left_encoder_.init_params(mix_seed(seed, 0));
  left_decoder_.init_params(mix_seed(seed, 1));
  right_encoder_.init_params(mix_seed(seed, 2));
  right_decoder_.init_params(mix_seed(seed, 3));

  if (left_decoder_.output_shape().channels != 1 ||
      left_decoder_.output_shape().length < config_.input_length) {
    throw std::invalid_argument("autoencoder config: decoder cannot cover the input length");
  }
}

std::vector<double> TwinAE::encode(Side side, const TimeSeries& t) const {
  if (static_cast<int>(t.size()) != config_.input_length) {
    throw std::invalid_argument("encode: expected series of length " +
                                std::to_string(config_.input_length) + ", got " +
                                std::to_string(t.size()));
  }
  return encoder(side).forward(Tensor::from_series(t)).data;
}

std::vector<double> TwinAE::embed(const TimeSeries& t) const {
  std::vector<double> left = encode(Side::Left, t);
  const std::vector<double> right = encode(Side::Right, t);
  for (std::size_t i = 0; i < left.size(); ++i) left[i] = 0.5 * (left[i] + right[i]);
  return left;
}

double reconstruction_loss(const Tensor& recon, const TimeSeries& target) {
  const int m = static_cast<int>(target.size());
  if (recon.rows != 1 || recon.cols < m) {
    throw std::invalid_argument("reconstruction: decoder output shorter than the target");
  }
  Tensor sliced(1, m, std::vector<double>(recon.data.begin(), recon.data.begin() + m));
  return mse_loss(sliced, Tensor::from_series(target));
}

Tensor reconstruction_loss_grad(const Tensor& recon, const TimeSeries& target) {
  const int m = static_cast<int>(target.size());
  if (recon.rows != 1 || recon.cols < m) {
    throw std::invalid_argument("reconstruction: decoder output shorter than the target");
  }
  Tensor sliced(1, m, std::vector<double>(recon.data.begin(), recon.data.begin() + m));
  const Tensor grad_m = mse_loss_grad(sliced, Tensor::from_series(target));
  Tensor grad(recon.rows, recon.cols);  // zero past the target length
  for (int i = 0; i < m; ++i) grad.data[static_cast<std::size_t>(i)] = grad_m.data[static_cast<std::size_t>(i)];
  return grad;
}

TwinLosses twin_forward(const TwinAE& twin, const TrainingPair& pair, TwinTape& tape) {
  const int m = twin.input_length();
  if (static_cast<int>(pair.left_input.size()) != m ||
      static_cast<int>(pair.right_input.size()) != m) {
    throw std::invalid_argument("twin forward: pair series must have length " +
                                std::to_string(m));
  }

  tape.left_target = pair.left_input;
  tape.right_target = pair.right_input;

  tape.left_code =
      twin.encoder(Side::Left).forward(Tensor::from_series(pair.left_input), tape.left_encoder);
  tape.left_recon = twin.decoder(Side::Left).forward(tape.left_code, tape.left_decoder);
  tape.right_code =
      twin.encoder(Side::Right).forward(Tensor::from_series(pair.right_input), tape.right_encoder);
  tape.right_recon = twin.decoder(Side::Right).forward(tape.right_code, tape.right_decoder);

  TwinLosses losses;
  losses.l1 = reconstruction_loss(tape.left_recon, pair.left_input);
  losses.l2 = reconstruction_loss(tape.right_recon, pair.right_input);
  losses.l3 = 0.0;
  for (std::size_t k = 0; k < tape.left_code.data.size(); ++k) {
    const double d = tape.left_code.data[k] - tape.right_code.data[k];
    losses.l3 += d * d;
  }
  losses.total = losses.l1 + losses.l2 + twin.config().loss_weight_lambda * losses.l3;
  return losses;
}

TwinLosses twin_forward(const TwinAE& twin, const TrainingPair& pair) {
  TwinTape tape;
  return twin_forward(twin, pair, tape);
}

TwinGradients twin_backward(const TwinAE& twin, TwinTape& tape, LossMask mask) {
  const double lambda = twin.config().loss_weight_lambda;

  TwinGradients grads;
  grads.left_encoder.assign(static_cast<std::size_t>(twin.encoder(Side::Left).param_count()), 0.0);
  grads.left_decoder.assign(static_cast<std::size_t>(twin.decoder(Side::Left).param_count()), 0.0);
  grads.right_encoder.assign(static_cast<std::size_t>(twin.encoder(Side::Right).param_count()), 0.0);
  grads.right_decoder.assign(static_cast<std::size_t>(twin.decoder(Side::Right).param_count()), 0.0);

  const int code = twin.code_length();
  Tensor left_code_grad(1, code);
  Tensor right_code_grad(1, code);

  if (mask.reconstruction) {
    left_code_grad = twin.decoder(Side::Left)
                         .backward(reconstruction_loss_grad(tape.left_recon, tape.left_target),
                                   tape.left_decoder, grads.left_decoder);
    right_code_grad = twin.decoder(Side::Right)
                          .backward(reconstruction_loss_grad(tape.right_recon, tape.right_target),
                                    tape.right_decoder, grads.right_decoder);
  }

  if (mask.coupling && lambda != 0.0) {
    for (int k = 0; k < code; ++k) {
      const double delta = 2.0 * lambda * (tape.left_code.data[static_cast<std::size_t>(k)] -
                                           tape.right_code.data[static_cast<std::size_t>(k)]);
      left_code_grad.data[static_cast<std::size_t>(k)] += delta;
      right_code_grad.data[static_cast<std::size_t>(k)] -= delta;
    }
  }

  twin.encoder(Side::Left).backward(left_code_grad, tape.left_encoder, grads.left_encoder);
  twin.encoder(Side::Right).backward(right_code_grad, tape.right_encoder, grads.right_encoder);
  return grads;
}

}  // namespace wartem
