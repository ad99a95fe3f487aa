#pragma once

#include <cstdint>
#include <vector>

#include "wartem/nn.hpp"
#include "wartem/series.hpp"
#include "wartem/warping.hpp"

namespace wartem {

enum class Side { Left, Right };
enum class Activation { Relu, Identity };

struct ConvBlock {
  int filters = 16;
  int kernel = 5;
};

/// Architecture hyperparameters shared by both autoencoders.
struct AEConfig {
  int input_length = 0;
  int code_length = 0;  ///< 0 selects the default round(0.2 * input_length)
  std::vector<ConvBlock> conv_blocks = {{16, 5}, {32, 5}};
  int pool_size = 2;
  Activation activation = Activation::Relu;
  double loss_weight_lambda = 1.0;  ///< weight of the code-coupling loss

  static int default_code_length(int input_length);
  int resolved_code_length() const;
};

/// Encoder: per block Conv1d + activation + MaxPool, then Dense to the code.
/// Decoder: Dense back to the bottleneck shape, per block Upsample + Conv1d +
/// activation with the channel progression reversed, then a final linear
/// Conv1d down to one channel. With no conv blocks both reduce to a single
/// Dense layer.
std::vector<LayerSpec> encoder_specs(const AEConfig& config);
std::vector<LayerSpec> decoder_specs(const AEConfig& config);

struct TwinLosses {
  double l1 = 0.0;  ///< left reconstruction
  double l2 = 0.0;  ///< right reconstruction
  double l3 = 0.0;  ///< squared distance between the codes
  double total = 0.0;
};

struct TwinTape {
  Tape left_encoder, left_decoder, right_encoder, right_decoder;
  Tensor left_code, right_code;
  Tensor left_recon, right_recon;  ///< full decoder outputs (length may exceed m)
  TimeSeries left_target, right_target;
};

struct TwinGradients {
  std::vector<double> left_encoder, left_decoder, right_encoder, right_decoder;
};

/// Which loss terms feed the backward pass. Training keeps both on; tests use
/// the mask to audit the gradient routing.
struct LossMask {
  bool reconstruction = true;
  bool coupling = true;
};

/// Two structurally identical, parameter-independent conv autoencoders. The
/// sides are initialized from distinct child seeds and never share weights.
class TwinAE {
 public:
  TwinAE(AEConfig config, std::uint64_t seed);

  const AEConfig& config() const { return config_; }
  int input_length() const { return config_.input_length; }
  int code_length() const { return config_.resolved_code_length(); }

  Network& encoder(Side side) { return side == Side::Left ? left_encoder_ : right_encoder_; }
  Network& decoder(Side side) { return side == Side::Left ? left_decoder_ : right_decoder_; }
  const Network& encoder(Side side) const {
    return side == Side::Left ? left_encoder_ : right_encoder_;
  }
  const Network& decoder(Side side) const {
    return side == Side::Left ? left_decoder_ : right_decoder_;
  }

  std::vector<double> encode(Side side, const TimeSeries& t) const;

  /// Average of the left and right codes.
  std::vector<double> embed(const TimeSeries& t) const;

 private:
  AEConfig config_;
  Network left_encoder_, left_decoder_, right_encoder_, right_decoder_;
};

/// Mean squared error of the reconstruction against the target, using the
/// first target.size() positions of the decoder output.
double reconstruction_loss(const Tensor& recon, const TimeSeries& target);

/// Gradient of reconstruction_loss with respect to the full decoder output;
/// positions past the target length get zero.
Tensor reconstruction_loss_grad(const Tensor& recon, const TimeSeries& target);

TwinLosses twin_forward(const TwinAE& twin, const TrainingPair& pair, TwinTape& tape);
TwinLosses twin_forward(const TwinAE& twin, const TrainingPair& pair);

/// Reverse pass. The coupling loss reaches only encoder parameters: decoder
/// gradients carry reconstruction terms alone, and the code gradients get
/// +-2 * lambda * (R1 - R2) added before entering the encoders.
TwinGradients twin_backward(const TwinAE& twin, TwinTape& tape, LossMask mask = {});

}  // namespace wartem
