// Command-line front end: warp / train / embed / eval subcommands wired into
// reproducible pipelines. Every run writes a provenance record (the full
// resolved configuration, seeds, and version) next to its outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wartem/config.hpp"
#include "wartem/evaluation.hpp"
#include "wartem/serialize.hpp"
#include "wartem/series.hpp"
#include "wartem/training.hpp"
#include "wartem/twin.hpp"
#include "wartem/version.hpp"
#include "wartem/warping.hpp"

namespace {

using namespace wartem;

using Items = std::vector<std::pair<std::string, std::string>>;

std::string render_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

WarpFamily family_from_string(const std::string& name) {
  if (name == "copy") return WarpFamily::Copy;
  if (name == "interpolation" || name == "interp") return WarpFamily::Interpolation;
  if (name == "mixed") return WarpFamily::Mixed;
  throw std::runtime_error("unknown warp family '" + name +
                           "' (expected copy, interpolation, or mixed)");
}

WarpDirection direction_from_string(const std::string& name) {
  if (name == "left") return WarpDirection::Left;
  if (name == "right") return WarpDirection::Right;
  throw std::runtime_error("unknown warp direction '" + name + "' (expected left or right)");
}

std::vector<ConvBlock> parse_conv_blocks(const std::string& text) {
  if (text.empty() || text == "none") return {};
  std::vector<ConvBlock> blocks;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string field = text.substr(start, comma - start);
    const std::size_t x = field.find('x');
    if (x == std::string::npos) {
      throw std::runtime_error("conv_blocks entries must look like '16x5', got '" + field + "'");
    }
    ConvBlock block;
    block.filters = std::stoi(field.substr(0, x));
    block.kernel = std::stoi(field.substr(x + 1));
    blocks.push_back(block);
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return blocks;
}

// inserts a suffix before the extension: model.wartem -> model_seed1.wartem
std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + suffix + p.extension().string();
  return out.string();
}

std::string history_path(const std::string& checkpoint_path) {
  const std::filesystem::path p(checkpoint_path);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + "_history.csv";
  return out.string();
}

std::string provenance_text(const std::string& command, const Items& items) {
  std::string text;
  text += "command = " + command + "\n";
  text += "version = " + std::string(kVersion) + "\n";
  for (const auto& [key, value] : items) text += key + " = " + value + "\n";
  return text;
}

std::string write_provenance(const std::string& path, const std::string& command,
                             const Items& items, bool append) {
  const std::string text = provenance_text(command, items);
  const std::string hash = fnv1a_hex(text);
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (append) out << "# ---\n";
  out << text << "config_hash = " << hash << "\n";
  return hash;
}

LabeledDataset load_dataset(const std::string& path, bool normalize) {
  LabeledDataset dataset = load_ucr_tsv(path);
  if (normalize) znormalize(dataset);
  return dataset;
}

// ---------------------------------------------------------------------------
// warp
// ---------------------------------------------------------------------------

struct WarpArgs {
  std::string input, output;
  std::string direction = "left";
  std::string family = "copy";
  int count = -1;  // -1: draw r per series
  std::uint64_t seed = 0;
};

int cmd_warp(const WarpArgs& args) {
  const WarpDirection direction = direction_from_string(args.direction);
  const WarpFamily family = family_from_string(args.family);

  LabeledDataset dataset = load_ucr_tsv(args.input);
  for (std::size_t i = 0; i < dataset.series.size(); ++i) {
    Engine child(mix_seed(args.seed, i));
    dataset.series[i] =
        args.count >= 0
            ? generate_warped_variant(dataset.series[i], direction, family, args.count, child)
            : generate_warped_variant(dataset.series[i], direction, family, child);
  }
  write_ucr_tsv(args.output, dataset);

  Items items = {{"input", args.input},
                 {"output", args.output},
                 {"direction", args.direction},
                 {"family", args.family},
                 {"count", std::to_string(args.count)},
                 {"seed", std::to_string(args.seed)}};
  write_provenance(args.output + ".prov", "warp", items, false);
  std::cout << "warped " << dataset.size() << " series -> " << args.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainSetup {
  TrainConfig config;
  std::vector<std::uint64_t> seeds;
  bool normalize = false;
};

TrainSetup read_train_config(KeyValueConfig& cfg) {
  TrainSetup setup;
  setup.config.family = family_from_string(cfg.get_string("family", "mixed"));
  setup.config.lambda = cfg.get_double("lambda", 1.0);
  setup.config.batch_size = static_cast<int>(cfg.get_int("batch_size", 32));
  setup.config.max_epochs = static_cast<int>(cfg.get_int("max_epochs", 500));
  setup.config.patience = static_cast<int>(cfg.get_int("patience", 20));
  setup.config.holdout_fraction = cfg.get_double("holdout_fraction", 0.1);
  setup.config.adam.learning_rate = cfg.get_double("learning_rate", 1e-3);
  setup.config.adam.beta1 = cfg.get_double("beta1", 0.9);
  setup.config.adam.beta2 = cfg.get_double("beta2", 0.999);
  setup.config.adam.epsilon = cfg.get_double("epsilon", 1e-8);
  setup.config.regenerate_pairs_each_epoch = cfg.get_bool("regenerate_pairs", true);
  setup.config.ae.code_length = static_cast<int>(cfg.get_int("code_length", 0));
  setup.config.ae.conv_blocks = parse_conv_blocks(cfg.get_string("conv_blocks", "16x5,32x5"));
  setup.config.ae.pool_size = static_cast<int>(cfg.get_int("pool_size", 2));
  const std::string activation = cfg.get_string("activation", "relu");
  if (activation == "relu") {
    setup.config.ae.activation = Activation::Relu;
  } else if (activation == "identity") {
    setup.config.ae.activation = Activation::Identity;
  } else {
    throw std::runtime_error("config key 'activation' expects relu or identity, got '" +
                             activation + "'");
  }
  setup.normalize = cfg.get_bool("normalize", false);

  if (cfg.has("seeds")) {
    setup.seeds = cfg.get_seed_list("seeds");
  } else if (cfg.has("seed")) {
    setup.seeds = {cfg.get_seed("seed", 0)};
  } else {
    throw std::runtime_error("missing config key 'seed' (or 'seeds')");
  }
  setup.config.seed = setup.seeds.front();
  return setup;
}

struct TrainArgs {
  std::string input, config_path, output;
};

int cmd_train(const TrainArgs& args) {
  KeyValueConfig cfg = KeyValueConfig::parse_file(args.config_path);
  TrainSetup setup = read_train_config(cfg);
  cfg.fail_on_unknown();

  const LabeledDataset dataset = load_dataset(args.input, setup.normalize);
  const auto results = multi_seed_train(dataset.series, setup.config, setup.seeds);

  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string checkpoint =
        setup.seeds.size() == 1
            ? args.output
            : with_suffix(args.output, "_seed" + std::to_string(setup.seeds[i]));
    save_twin(results[i].model, checkpoint);
    write_history_csv(history_path(checkpoint), results[i].history);

    const auto& history = results[i].history;
    const double best_loss =
        history.epochs[static_cast<std::size_t>(history.best_epoch - 1)].holdout_total;
    std::cout << "seed " << setup.seeds[i] << ": best holdout loss " << render_double(best_loss)
              << " at epoch " << history.best_epoch << " (stopped at " << history.stopped_epoch
              << ") -> " << checkpoint << "\n";
  }

  Items items = {{"input", args.input}, {"output", args.output}};
  for (const auto& item : cfg.resolved()) items.push_back(item);
  {
    std::string seed_list;
    for (const auto s : setup.seeds) {
      if (!seed_list.empty()) seed_list += ",";
      seed_list += std::to_string(s);
    }
    items.emplace_back("resolved_seeds", seed_list);
  }
  write_provenance(args.output + ".prov", "train", items, false);
  return 0;
}

// ---------------------------------------------------------------------------
// embed
// ---------------------------------------------------------------------------

struct EmbedArgs {
  std::vector<std::string> models;
  std::string input, output;
  bool normalize = false;
};

int cmd_embed(const EmbedArgs& args) {
  if (args.models.empty()) throw std::runtime_error("embed requires at least one --model path");
  const LabeledDataset dataset = load_dataset(args.input, args.normalize);

  for (std::size_t k = 0; k < args.models.size(); ++k) {
    const TwinAE model = load_twin(args.models[k]);
    if (model.input_length() != dataset.length) {
      throw std::runtime_error("model " + args.models[k] + " expects series of length " +
                               std::to_string(model.input_length()) + ", data has " +
                               std::to_string(dataset.length));
    }
    const std::string path = args.models.size() == 1
                                 ? args.output
                                 : with_suffix(args.output, "_m" + std::to_string(k));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int i = 0; i < dataset.size(); ++i) {
      out << dataset.labels[static_cast<std::size_t>(i)];
      for (const double v : model.embed(dataset.series[static_cast<std::size_t>(i)])) {
        out << ',' << render_double(v);
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
    std::cout << "embedded " << dataset.size() << " series (d=" << model.code_length() << ") -> "
              << path << "\n";
  }

  Items items = {{"input", args.input},
                 {"output", args.output},
                 {"normalize", args.normalize ? "true" : "false"}};
  for (std::size_t k = 0; k < args.models.size(); ++k) {
    items.emplace_back("model" + std::to_string(k), args.models[k]);
  }
  write_provenance(args.output + ".prov", "embed", items, false);
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string mode;
  std::string train_path, test_path, report;
  std::string dataset_name;
  std::vector<std::string> models;
  std::string config_path;
};

int cmd_eval(const EvalArgs& args) {
  KeyValueConfig cfg = args.config_path.empty()
                           ? KeyValueConfig()
                           : KeyValueConfig::parse_file(args.config_path);

  ClassifierConfig classifier;
  classifier.trials = static_cast<int>(cfg.get_int("trials", 10));
  classifier.max_epochs = static_cast<int>(cfg.get_int("max_epochs", 300));
  classifier.patience = static_cast<int>(cfg.get_int("patience", 20));
  classifier.batch_size = static_cast<int>(cfg.get_int("batch_size", 32));
  classifier.holdout_fraction = cfg.get_double("holdout_fraction", 0.1);
  classifier.adam.learning_rate = cfg.get_double("learning_rate", 1e-3);
  classifier.seed = cfg.get_seed("seed", 0);
  const long long band = cfg.get_int("dtw_band", -1);
  const bool normalize = cfg.get_bool("normalize", false);
  cfg.fail_on_unknown();

  const std::string dataset_name =
      args.dataset_name.empty() ? std::filesystem::path(args.train_path).stem().string()
                                : args.dataset_name;

  const LabeledDataset train = load_dataset(args.train_path, normalize);
  const LabeledDataset test = load_dataset(args.test_path, normalize);

  const bool needs_models = args.mode == "wartem-nn" || args.mode == "wartem-dl";
  if (needs_models && args.models.empty()) {
    throw std::runtime_error("mode '" + args.mode + "' requires at least one --model path");
  }
  std::vector<TwinAE> models;
  for (const auto& path : args.models) models.push_back(load_twin(path));

  EvalEntry entry;
  if (args.mode == "eucl-nn") {
    entry = eval_baseline_nn(train, test, DistanceKind::euclidean(), dataset_name);
  } else if (args.mode == "dtw-nn") {
    entry = eval_baseline_nn(
        train, test,
        DistanceKind::dtw(band >= 0 ? std::optional<int>(static_cast<int>(band)) : std::nullopt),
        dataset_name);
  } else if (args.mode == "wartem-nn") {
    entry = eval_wartem_nn(models, train, test, dataset_name);
  } else if (args.mode == "dl") {
    entry = eval_dl(train, test, classifier, dataset_name);
  } else if (args.mode == "wartem-dl") {
    entry = eval_wartem_dl(models, train, test, classifier, dataset_name);
  } else {
    throw std::runtime_error("unknown eval mode '" + args.mode +
                             "' (expected wartem-nn, eucl-nn, dtw-nn, wartem-dl, or dl)");
  }

  Items items = {{"mode", args.mode},
                 {"train", args.train_path},
                 {"test", args.test_path},
                 {"dataset", dataset_name},
                 {"report", args.report}};
  for (std::size_t k = 0; k < args.models.size(); ++k) {
    items.emplace_back("model" + std::to_string(k), args.models[k]);
  }
  for (const auto& item : cfg.resolved()) items.push_back(item);
  entry.config_hash = fnv1a_hex(provenance_text("eval", items));

  append_report_entry(args.report, entry);
  write_provenance(args.report + ".prov", "eval", items, true);

  char line[160];
  std::snprintf(line, sizeof(line), "%s %s: %.2f", dataset_name.c_str(), args.mode.c_str(),
                entry.mean);
  std::cout << line;
  if (entry.seeds > 1) {
    std::snprintf(line, sizeof(line), " +- %.2f (%d seeds)", entry.stddev, entry.seeds);
    std::cout << line;
  }
  std::cout << "\n\n" << format_report_table(read_report_csv(args.report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warping-resilient time series embeddings"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  WarpArgs warp_args;
  CLI::App* warp = app.add_subcommand("warp", "write a warped copy of a TSV dataset");
  warp->add_option("-i,--input", warp_args.input, "input TSV")->required();
  warp->add_option("-o,--output", warp_args.output, "output TSV")->required();
  warp->add_option("--direction", warp_args.direction, "left or right");
  warp->add_option("--family", warp_args.family, "copy, interpolation, or mixed");
  warp->add_option("--count", warp_args.count, "warps per series; omit to draw r randomly");
  warp->add_option("--seed", warp_args.seed, "random seed");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train twin autoencoders on a TSV dataset");
  train->add_option("-i,--input", train_args.input, "training TSV")->required();
  train->add_option("-c,--config", train_args.config_path, "key = value config file")->required();
  train->add_option("-o,--output", train_args.output, "checkpoint path")->required();

  EmbedArgs embed_args;
  CLI::App* embed = app.add_subcommand("embed", "embed a TSV dataset with trained models");
  embed->add_option("-m,--model", embed_args.models, "checkpoint path (repeatable)")->required();
  embed->add_option("-i,--input", embed_args.input, "input TSV")->required();
  embed->add_option("-o,--output", embed_args.output, "output CSV")->required();
  embed->add_flag("--normalize", embed_args.normalize, "z-normalize series before embedding");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "run an evaluation protocol and append to a report");
  eval->add_option("--mode", eval_args.mode, "wartem-nn, eucl-nn, dtw-nn, wartem-dl, or dl")
      ->required();
  eval->add_option("--train", eval_args.train_path, "train split TSV")->required();
  eval->add_option("--test", eval_args.test_path, "test split TSV")->required();
  eval->add_option("--report", eval_args.report, "report CSV to append to")->required();
  eval->add_option("--dataset", eval_args.dataset_name, "dataset name for the report");
  eval->add_option("-m,--model", eval_args.models, "checkpoint path (repeatable)");
  eval->add_option("-c,--config", eval_args.config_path, "key = value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(warp)) return cmd_warp(warp_args);
    if (app.got_subcommand(train)) return cmd_train(train_args);
    if (app.got_subcommand(embed)) return cmd_embed(embed_args);
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
