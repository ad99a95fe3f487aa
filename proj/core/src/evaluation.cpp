#include "wartem/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wartem/rng.hpp"
#include "wartem/training.hpp"

namespace wartem {

namespace {

constexpr std::uint64_t kClassifierSplitStream = 0x636c7370ULL;
constexpr std::uint64_t kClassifierOrderStream = 0x636c6f72ULL;
constexpr std::uint64_t kTrialStream = 0x7472ULL;

std::vector<std::vector<double>> to_vectors(const LabeledDataset& d) {
  return {d.series.begin(), d.series.end()};
}

std::vector<std::vector<double>> embed_all(const TwinAE& model, const LabeledDataset& d) {
  std::vector<std::vector<double>> out;
  out.reserve(d.series.size());
  for (const auto& t : d.series) out.push_back(model.embed(t));
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double mu = mean_of(v);
  double var = 0.0;
  for (const double x : v) var += (x - mu) * (x - mu);
  return std::sqrt(var / static_cast<double>(v.size()));
}

void check_splits(const LabeledDataset& train, const LabeledDataset& test) {
  if (train.length != test.length) {
    throw std::invalid_argument("train and test splits must share the series length");
  }
  if (train.size() < 1 || test.size() < 1) {
    throw std::invalid_argument("train and test splits must be non-empty");
  }
}

std::string render(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, const std::string& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error(path + ": bad numeric field '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string per_seed_path(const std::string& path) { return path + ".per_seed.csv"; }

}  // namespace

EvalEntry eval_wartem_nn(const std::vector<TwinAE>& models, const LabeledDataset& train,
                         const LabeledDataset& test, const std::string& dataset_name) {
  if (models.empty()) throw std::invalid_argument("wartem-nn: need at least one model");
  check_splits(train, test);

  EvalEntry entry;
  entry.dataset = dataset_name;
  entry.method = "wartem-nn";
  for (const auto& model : models) {
    if (model.input_length() != train.length) {
      throw std::invalid_argument("wartem-nn: model expects series of length " +
                                  std::to_string(model.input_length()) + ", data has " +
                                  std::to_string(train.length));
    }
    const auto train_codes = embed_all(model, train);
    const auto test_codes = embed_all(model, test);
    const NNResult result = one_nn_accuracy(train_codes, train.labels, test_codes, test.labels,
                                            DistanceKind::squared_euclidean());
    entry.per_seed.push_back(100.0 * result.accuracy);
  }
  entry.seeds = static_cast<int>(models.size());
  entry.mean = mean_of(entry.per_seed);
  entry.stddev = population_std(entry.per_seed);
  return entry;
}

EvalEntry eval_baseline_nn(const LabeledDataset& train, const LabeledDataset& test,
                           const DistanceKind& kind, const std::string& dataset_name) {
  check_splits(train, test);
  const NNResult result =
      one_nn_accuracy(to_vectors(train), train.labels, to_vectors(test), test.labels, kind);

  EvalEntry entry;
  entry.dataset = dataset_name;
  entry.method = kind.type == DistanceKind::Type::DTW ? "dtw-nn" : "eucl-nn";
  entry.mean = 100.0 * result.accuracy;
  entry.stddev = 0.0;
  entry.seeds = 1;
  entry.per_seed = {entry.mean};
  return entry;
}

std::vector<LayerSpec> classifier_specs(int input_dim, int class_count) {
  if (input_dim < 1) throw std::invalid_argument("classifier: input dimension must be >= 1");
  if (class_count < 2) throw std::invalid_argument("classifier: need at least 2 classes");
  const int hidden = std::max(10, input_dim / 10);
  return {Dense{input_dim, hidden, 1}, Relu{}, Dense{hidden, 50, 1}, Relu{},
          Dense{50, class_count, 1}};
}

Network train_static_classifier(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, int class_count,
                                const ClassifierConfig& config, std::uint64_t seed) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("classifier: features and labels must match and be non-empty");
  }
  const int dim = static_cast<int>(x.front().size());
  for (const int label : y) {
    if (label < 0 || label >= class_count) {
      throw std::invalid_argument("classifier: label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(class_count) + ")");
    }
  }

  Network net(classifier_specs(dim, class_count), Shape{1, dim});
  net.init_params(seed);

  const auto [fit_idx, holdout_idx] = split_indices(
      static_cast<int>(x.size()), config.holdout_fraction, mix_seed(seed, kClassifierSplitStream));

  const auto sample_loss_and_grads = [&](int idx, std::vector<double>* grads) {
    const Tensor input = Tensor::from_series(x[static_cast<std::size_t>(idx)]);
    const int label = y[static_cast<std::size_t>(idx)];
    if (grads == nullptr) {
      const Tensor logits = net.forward(input);
      return softmax_cross_entropy(logits.data, label);
    }
    Tape tape;
    const Tensor logits = net.forward(input, tape);
    const double loss = softmax_cross_entropy(logits.data, label);
    Tensor grad_logits(logits.rows, logits.cols, softmax_cross_entropy_grad(logits.data, label));
    net.backward(grad_logits, tape, *grads);
    return loss;
  };

  AdamState adam(net.param_count(), config.adam);
  EarlyStopper stopper(config.patience);
  std::vector<double> best_params(net.params().begin(), net.params().end());
  std::vector<double> grads(static_cast<std::size_t>(net.param_count()), 0.0);

  std::vector<int> order = fit_idx;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Engine shuffler(mix_seed(seed, kClassifierOrderStream, static_cast<std::uint64_t>(epoch)));
    shuffler.shuffle(order);

    const int n = static_cast<int>(order.size());
    for (int start = 0; start < n; start += config.batch_size) {
      const int stop = std::min(n, start + config.batch_size);
      std::fill(grads.begin(), grads.end(), 0.0);
      double batch_loss = 0.0;
      for (int i = start; i < stop; ++i) {
        batch_loss += sample_loss_and_grads(order[static_cast<std::size_t>(i)], &grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error("classifier training diverged at epoch " + std::to_string(epoch));
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (auto& g : grads) g *= inv;
      adam.step(net.params(), grads);
    }

    double holdout_loss = 0.0;
    for (const int i : holdout_idx) holdout_loss += sample_loss_and_grads(i, nullptr);
    holdout_loss /= static_cast<double>(holdout_idx.size());

    if (stopper.observe(holdout_loss)) {
      best_params.assign(net.params().begin(), net.params().end());
    }
    if (stopper.should_stop()) break;
  }

  auto params = net.params();
  for (std::size_t i = 0; i < best_params.size(); ++i) params[i] = best_params[i];
  return net;
}

double eval_static(const Network& net, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("classifier eval: features and labels must match");
  }
  long long correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Tensor logits = net.forward(Tensor::from_series(x[i]));
    const auto best = std::max_element(logits.data.begin(), logits.data.end());
    const int predicted = static_cast<int>(best - logits.data.begin());
    if (predicted == y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(x.size());
}

namespace {

struct TrialOutcome {
  double best = 0.0;
  std::vector<double> all;
};

TrialOutcome run_classifier_trials(const std::vector<std::vector<double>>& train_x,
                                   const std::vector<int>& train_y,
                                   const std::vector<std::vector<double>>& test_x,
                                   const std::vector<int>& test_y, int class_count,
                                   const ClassifierConfig& config, std::uint64_t seed) {
  TrialOutcome outcome;
  if (config.trials < 1) throw std::invalid_argument("classifier: trials must be >= 1");
  for (int trial = 0; trial < config.trials; ++trial) {
    const Network net = train_static_classifier(
        train_x, train_y, class_count, config,
        mix_seed(seed, kTrialStream, static_cast<std::uint64_t>(trial)));
    outcome.all.push_back(100.0 * eval_static(net, test_x, test_y));
  }
  outcome.best = *std::max_element(outcome.all.begin(), outcome.all.end());
  return outcome;
}

}  // namespace

EvalEntry eval_dl(const LabeledDataset& train, const LabeledDataset& test,
                  const ClassifierConfig& config, const std::string& dataset_name) {
  check_splits(train, test);
  const TrialOutcome outcome =
      run_classifier_trials(to_vectors(train), train.labels, to_vectors(test), test.labels,
                            train.class_count, config, config.seed);

  EvalEntry entry;
  entry.dataset = dataset_name;
  entry.method = "dl";
  entry.mean = outcome.best;
  entry.stddev = 0.0;
  entry.seeds = 1;
  entry.trial_mean = mean_of(outcome.all);
  entry.per_seed = outcome.all;
  return entry;
}

EvalEntry eval_wartem_dl(const std::vector<TwinAE>& models, const LabeledDataset& train,
                         const LabeledDataset& test, const ClassifierConfig& config,
                         const std::string& dataset_name) {
  if (models.empty()) throw std::invalid_argument("wartem-dl: need at least one model");
  check_splits(train, test);

  std::vector<double> best_per_model;
  std::vector<double> all_trials;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto train_codes = embed_all(models[k], train);
    const auto test_codes = embed_all(models[k], test);
    const TrialOutcome outcome =
        run_classifier_trials(train_codes, train.labels, test_codes, test.labels,
                              train.class_count, config, mix_seed(config.seed, k));
    best_per_model.push_back(outcome.best);
    all_trials.insert(all_trials.end(), outcome.all.begin(), outcome.all.end());
  }

  EvalEntry entry;
  entry.dataset = dataset_name;
  entry.method = "wartem-dl";
  entry.mean = mean_of(best_per_model);
  entry.stddev = population_std(best_per_model);
  entry.seeds = static_cast<int>(models.size());
  entry.trial_mean = mean_of(all_trials);
  entry.per_seed = best_per_model;
  return entry;
}

void write_report_csv(const std::string& path, const std::vector<EvalEntry>& entries) {
  if (entries.empty()) throw std::invalid_argument("report: no entries to write");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "dataset,method,mean,std,seeds,trial_mean,config_hash\n";
  for (const auto& e : entries) {
    out << e.dataset << ',' << e.method << ',' << render(e.mean) << ',' << render(e.stddev) << ','
        << e.seeds << ',' << (std::isnan(e.trial_mean) ? std::string() : render(e.trial_mean))
        << ',' << e.config_hash << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);

  std::ofstream sidecar(per_seed_path(path));
  if (!sidecar) throw std::runtime_error("cannot write " + per_seed_path(path));
  sidecar << "dataset,method,index,accuracy\n";
  for (const auto& e : entries) {
    for (std::size_t i = 0; i < e.per_seed.size(); ++i) {
      sidecar << e.dataset << ',' << e.method << ',' << i << ',' << render(e.per_seed[i]) << '\n';
    }
  }
}

std::vector<EvalEntry> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty report");

  std::vector<EvalEntry> entries;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 7) {
      throw std::runtime_error(path + ": expected 7 fields, got " +
                               std::to_string(fields.size()));
    }
    EvalEntry e;
    e.dataset = fields[0];
    e.method = fields[1];
    e.mean = parse_double(fields[2], path);
    e.stddev = parse_double(fields[3], path);
    e.seeds = static_cast<int>(parse_double(fields[4], path));
    e.trial_mean = fields[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : parse_double(fields[5], path);
    e.config_hash = fields[6];
    entries.push_back(std::move(e));
  }

  const std::string sidecar = per_seed_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar);
    std::map<std::pair<std::string, std::string>, std::vector<double>> per_seed;
    std::getline(side, line);  // header
    while (std::getline(side, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto fields = split_commas(line);
      if (fields.size() != 4) continue;
      per_seed[{fields[0], fields[1]}].push_back(parse_double(fields[3], sidecar));
    }
    for (auto& e : entries) {
      const auto it = per_seed.find({e.dataset, e.method});
      if (it != per_seed.end()) e.per_seed = it->second;
    }
  }
  return entries;
}

void append_report_entry(const std::string& path, const EvalEntry& entry) {
  std::vector<EvalEntry> entries;
  if (std::filesystem::exists(path)) entries = read_report_csv(path);
  entries.push_back(entry);
  write_report_csv(path, entries);
}

std::string format_report_table(const std::vector<EvalEntry>& entries) {
  std::map<std::string, double> best_mean;
  for (const auto& e : entries) {
    auto [it, inserted] = best_mean.try_emplace(e.dataset, e.mean);
    if (!inserted) it->second = std::max(it->second, e.mean);
  }

  std::ostringstream out;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%-20s %-12s %10s %8s %6s %12s\n", "dataset", "method", "mean",
                "std", "seeds", "trial_mean");
  out << buf;
  for (const auto& e : entries) {
    const bool best = e.mean == best_mean.at(e.dataset);
    std::string method = e.method;
    if (best) method += " *";
    char trial[32] = "-";
    if (!std::isnan(e.trial_mean)) std::snprintf(trial, sizeof(trial), "%.2f", e.trial_mean);
    std::snprintf(buf, sizeof(buf), "%-20s %-12s %10.2f %8.2f %6d %12s\n", e.dataset.c_str(),
                  method.c_str(), e.mean, e.stddev, e.seeds, trial);
    out << buf;
  }
  return out.str();
}

}  // namespace wartem
