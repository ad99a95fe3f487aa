#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wartem/nn.hpp"
#include "wartem/series.hpp"
#include "wartem/twin.hpp"
#include "wartem/warping.hpp"

namespace wartem {

struct TrainConfig {
  WarpFamily family = WarpFamily::Mixed;
  double lambda = 1.0;
  int batch_size = 32;
  int max_epochs = 500;
  int patience = 20;
  double holdout_fraction = 0.1;
  AdamConfig adam{};
  std::uint64_t seed = 0;
  bool regenerate_pairs_each_epoch = true;
  AEConfig ae{};  ///< input_length is taken from the data; lambda from above
};

struct EpochStats {
  double train_total = 0.0;
  double holdout_total = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;  ///< entry e-1 describes epoch e (1-based)
  int stopped_epoch = 0;
  int best_epoch = 0;  ///< argmin of the held-out total loss
};

/// Tracks a loss stream and fires after `patience` consecutive epochs without
/// strict improvement. Epochs are 1-based.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience);

  /// Returns true when `loss` strictly improves on the best seen so far.
  bool observe(double loss);

  bool should_stop() const { return streak_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  int epochs_seen() const { return epoch_; }

 private:
  int patience_;
  int epoch_ = 0;
  int best_epoch_ = 0;
  int streak_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainResult {
  TwinAE model;
  TrainHistory history;
};

/// Unsupervised training on a plain series view; labels never enter here.
/// Splits off a held-out fraction for early stopping, regenerates the 2n
/// training pairs per epoch (unless frozen), optimizes the total loss with
/// mini-batch Adam, and returns the parameters from the best epoch.
TrainResult train(const std::vector<TimeSeries>& series, TrainConfig config);

/// Independent runs differing only in seed, in seed order. Runs execute in
/// parallel; results do not depend on the schedule. A failed run reports its
/// seed in the error.
std::vector<TrainResult> multi_seed_train(const std::vector<TimeSeries>& series,
                                          const TrainConfig& config,
                                          const std::vector<std::uint64_t>& seeds);

/// Headers-included CSV of the per-epoch losses.
void write_history_csv(const std::string& path, const TrainHistory& history);

}  // namespace wartem
