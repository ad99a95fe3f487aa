#include "wartem/training.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "wartem/parallel.hpp"
#include "wartem/rng.hpp"

namespace wartem {

namespace {

// Stream tags for child-seed derivation; distinct from epoch/series indices.
constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;    // "split"
constexpr std::uint64_t kHoldoutStream = 0x686f6c64ULL;    // "hold"
constexpr std::uint64_t kPairStream = 0x7061697273ULL;     // "pairs"

void validate(const TrainConfig& config, std::size_t n) {
  if (n < 3) {
    throw std::invalid_argument("training needs at least 3 series, got " + std::to_string(n));
  }
  if (config.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (config.patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (config.max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (!(config.holdout_fraction > 0.0 && config.holdout_fraction < 1.0)) {
    throw std::invalid_argument("holdout_fraction must be in (0, 1)");
  }
}

struct ParamSnapshot {
  std::array<std::vector<double>, 4> values;

  static ParamSnapshot capture(const TwinAE& twin) {
    ParamSnapshot snap;
    const auto copy = [](const Network& net) {
      return std::vector<double>(net.params().begin(), net.params().end());
    };
    snap.values = {copy(twin.encoder(Side::Left)), copy(twin.decoder(Side::Left)),
                   copy(twin.encoder(Side::Right)), copy(twin.decoder(Side::Right))};
    return snap;
  }

  void restore(TwinAE& twin) const {
    const auto paste = [](const std::vector<double>& src, Network& net) {
      auto dst = net.params();
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    };
    paste(values[0], twin.encoder(Side::Left));
    paste(values[1], twin.decoder(Side::Left));
    paste(values[2], twin.encoder(Side::Right));
    paste(values[3], twin.decoder(Side::Right));
  }
};

void add_into(std::vector<double>& acc, const std::vector<double>& g) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
}

void scale(std::vector<double>& v, double s) {
  for (auto& x : v) x *= s;
}

}  // namespace

EarlyStopper::EarlyStopper(int patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

bool EarlyStopper::observe(double loss) {
  ++epoch_;
  if (loss < best_loss_) {
    best_loss_ = loss;
    best_epoch_ = epoch_;
    streak_ = 0;
    return true;
  }
  ++streak_;
  return false;
}

TrainResult train(const std::vector<TimeSeries>& series, TrainConfig config) {
  validate(config, series.size());
  const int m = static_cast<int>(series.front().size());
  for (const auto& t : series) {
    if (static_cast<int>(t.size()) != m) {
      throw std::invalid_argument("training series must share one length");
    }
  }
  if (m < 4) throw std::invalid_argument("training series must have length >= 4");

  config.ae.input_length = m;
  config.ae.loss_weight_lambda = config.lambda;

  const auto [train_idx, holdout_idx] = split_indices(
      static_cast<int>(series.size()), config.holdout_fraction, mix_seed(config.seed, kSplitStream));

  std::vector<TimeSeries> train_series, holdout_series;
  train_series.reserve(train_idx.size());
  holdout_series.reserve(holdout_idx.size());
  for (const int i : train_idx) train_series.push_back(series[static_cast<std::size_t>(i)]);
  for (const int i : holdout_idx) holdout_series.push_back(series[static_cast<std::size_t>(i)]);

  TwinAE twin(config.ae, config.seed);

  // Held-out pairs are drawn once so the early-stopping signal is stable.
  const auto holdout_pairs =
      make_training_pairs(holdout_series, config.family, mix_seed(config.seed, kHoldoutStream));

  AdamState adam_left_enc(twin.encoder(Side::Left).param_count(), config.adam);
  AdamState adam_left_dec(twin.decoder(Side::Left).param_count(), config.adam);
  AdamState adam_right_enc(twin.encoder(Side::Right).param_count(), config.adam);
  AdamState adam_right_dec(twin.decoder(Side::Right).param_count(), config.adam);

  TrainHistory history;
  EarlyStopper stopper(config.patience);
  ParamSnapshot best = ParamSnapshot::capture(twin);

  std::vector<double> acc_left_enc(static_cast<std::size_t>(twin.encoder(Side::Left).param_count()));
  std::vector<double> acc_left_dec(static_cast<std::size_t>(twin.decoder(Side::Left).param_count()));
  std::vector<double> acc_right_enc(static_cast<std::size_t>(twin.encoder(Side::Right).param_count()));
  std::vector<double> acc_right_dec(static_cast<std::size_t>(twin.decoder(Side::Right).param_count()));

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const std::uint64_t epoch_tag = config.regenerate_pairs_each_epoch
                                        ? static_cast<std::uint64_t>(epoch)
                                        : std::uint64_t{1};
    const auto pairs = make_training_pairs(train_series, config.family,
                                           mix_seed(config.seed, kPairStream, epoch_tag));

    double sum_total = 0.0, sum_l1 = 0.0, sum_l2 = 0.0, sum_l3 = 0.0;
    const int pair_count = static_cast<int>(pairs.size());
    int batch_index = 0;
    for (int start = 0; start < pair_count; start += config.batch_size, ++batch_index) {
      const int stop = std::min(pair_count, start + config.batch_size);
      std::fill(acc_left_enc.begin(), acc_left_enc.end(), 0.0);
      std::fill(acc_left_dec.begin(), acc_left_dec.end(), 0.0);
      std::fill(acc_right_enc.begin(), acc_right_enc.end(), 0.0);
      std::fill(acc_right_dec.begin(), acc_right_dec.end(), 0.0);

      double batch_total = 0.0;
      for (int i = start; i < stop; ++i) {
        TwinTape tape;
        const TwinLosses losses = twin_forward(twin, pairs[static_cast<std::size_t>(i)], tape);
        const TwinGradients grads = twin_backward(twin, tape);
        add_into(acc_left_enc, grads.left_encoder);
        add_into(acc_left_dec, grads.left_decoder);
        add_into(acc_right_enc, grads.right_encoder);
        add_into(acc_right_dec, grads.right_decoder);
        batch_total += losses.total;
        sum_total += losses.total;
        sum_l1 += losses.l1;
        sum_l2 += losses.l2;
        sum_l3 += losses.l3;
      }
      if (!std::isfinite(batch_total)) {
        throw std::runtime_error("training diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batch_index));
      }

      const double inv = 1.0 / static_cast<double>(stop - start);
      scale(acc_left_enc, inv);
      scale(acc_left_dec, inv);
      scale(acc_right_enc, inv);
      scale(acc_right_dec, inv);
      adam_left_enc.step(twin.encoder(Side::Left).params(), acc_left_enc);
      adam_left_dec.step(twin.decoder(Side::Left).params(), acc_left_dec);
      adam_right_enc.step(twin.encoder(Side::Right).params(), acc_right_enc);
      adam_right_dec.step(twin.decoder(Side::Right).params(), acc_right_dec);
    }

    double holdout_total = 0.0;
    for (const auto& pair : holdout_pairs) holdout_total += twin_forward(twin, pair).total;
    holdout_total /= static_cast<double>(holdout_pairs.size());
    if (!std::isfinite(holdout_total)) {
      throw std::runtime_error("training diverged (non-finite held-out loss) at epoch " +
                               std::to_string(epoch));
    }

    EpochStats stats;
    stats.train_total = sum_total / static_cast<double>(pair_count);
    stats.holdout_total = holdout_total;
    stats.l1 = sum_l1 / static_cast<double>(pair_count);
    stats.l2 = sum_l2 / static_cast<double>(pair_count);
    stats.l3 = sum_l3 / static_cast<double>(pair_count);
    history.epochs.push_back(stats);

    if (stopper.observe(holdout_total)) {
      best = ParamSnapshot::capture(twin);
    }
    history.stopped_epoch = epoch;
    if (stopper.should_stop()) break;
  }

  history.best_epoch = stopper.best_epoch();
  best.restore(twin);
  return {std::move(twin), std::move(history)};
}

std::vector<TrainResult> multi_seed_train(const std::vector<TimeSeries>& series,
                                          const TrainConfig& config,
                                          const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("multi_seed_train: need at least one seed");

  std::vector<std::optional<TrainResult>> slots(seeds.size());
  std::vector<std::string> errors(seeds.size());
  parallel_for(0, static_cast<int>(seeds.size()), [&](int i) {
    try {
      TrainConfig run = config;
      run.seed = seeds[static_cast<std::size_t>(i)];
      slots[static_cast<std::size_t>(i)] = train(series, run);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  });

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("training run with seed " + std::to_string(seeds[i]) +
                               " failed: " + errors[i]);
    }
  }

  std::vector<TrainResult> results;
  results.reserve(seeds.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "epoch,train_total,holdout_total,l1,l2,l3\n";
  char buf[160];
  for (std::size_t e = 0; e < history.epochs.size(); ++e) {
    const auto& s = history.epochs[e];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", e + 1, s.train_total,
                  s.holdout_total, s.l1, s.l2, s.l3);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wartem
