#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wartem/distance.hpp"
#include "wartem/nn.hpp"
#include "wartem/series.hpp"
#include "wartem/twin.hpp"

namespace wartem {

/// One report row. Accuracies are percentages. For classifier protocols the
/// headline number is the best test accuracy over the training trials (an
/// optimistic selection), so the plain trial mean is carried alongside.
struct EvalEntry {
  std::string dataset;
  std::string method;
  double mean = 0.0;
  double stddev = 0.0;  ///< population std across seeds; 0 for single-seed methods
  int seeds = 1;
  double trial_mean = std::numeric_limits<double>::quiet_NaN();  ///< classifier protocols only
  std::string config_hash;
  std::vector<double> per_seed;  ///< persisted next to the report for audit
};

/// Embeds train and test with each model, scores 1-NN with the squared
/// Euclidean distance in code space, and reports mean and population std
/// across the models.
EvalEntry eval_wartem_nn(const std::vector<TwinAE>& models, const LabeledDataset& train,
                         const LabeledDataset& test, const std::string& dataset_name);

/// 1-NN on the raw series under the given distance. Deterministic.
EvalEntry eval_baseline_nn(const LabeledDataset& train, const LabeledDataset& test,
                           const DistanceKind& kind, const std::string& dataset_name);

struct ClassifierConfig {
  int trials = 10;
  int max_epochs = 300;
  int patience = 20;
  int batch_size = 32;
  double holdout_fraction = 0.1;
  AdamConfig adam{};
  std::uint64_t seed = 0;
};

/// Dense(input -> max(10, floor(input / 10))) + ReLU + Dense(-> 50) + ReLU +
/// Dense(-> class_count), trained with softmax cross entropy.
std::vector<LayerSpec> classifier_specs(int input_dim, int class_count);

Network train_static_classifier(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, int class_count,
                                const ClassifierConfig& config, std::uint64_t seed);

/// Accuracy in [0, 1]; argmax ties break to the lowest class index.
double eval_static(const Network& net, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y);

/// Classifier protocol on the raw series: `trials` trainings, best test
/// accuracy selected, trial mean carried alongside.
EvalEntry eval_dl(const LabeledDataset& train, const LabeledDataset& test,
                  const ClassifierConfig& config, const std::string& dataset_name);

/// Classifier protocol on embeddings: per model the best accuracy over
/// `trials` trainings, then mean and std across models.
EvalEntry eval_wartem_dl(const std::vector<TwinAE>& models, const LabeledDataset& train,
                         const LabeledDataset& test, const ClassifierConfig& config,
                         const std::string& dataset_name);

// Report files. The CSV holds one row per entry; per-seed accuracies go to a
// sidecar "<path>.per_seed.csv". Values are rendered with enough digits to
// round-trip.
void write_report_csv(const std::string& path, const std::vector<EvalEntry>& entries);
std::vector<EvalEntry> read_report_csv(const std::string& path);
void append_report_entry(const std::string& path, const EvalEntry& entry);

/// Aligned text table; the best mean per dataset is flagged, ties share the flag.
std::string format_report_table(const std::vector<EvalEntry>& entries);

}  // namespace wartem
