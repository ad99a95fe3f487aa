#include "wartem/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "wartem/rng.hpp"

namespace wartem {

namespace {

double parse_number(std::string_view field, const std::string& path, int line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": cannot parse numeric field '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": non-finite value '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

void render_value(std::string& out, double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

void render_label(std::string& out, double label) {
  const long long rounded = std::llround(label);
  if (static_cast<double>(rounded) == label) {
    out += std::to_string(rounded);
  } else {
    render_value(out, label);
  }
}

}  // namespace

LabeledDataset load_ucr_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  LabeledDataset dataset;
  std::unordered_map<long long, int> label_ids;
  std::string line;
  int line_no = 0;
  int arity = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split_tabs(line);
    if (arity < 0) {
      arity = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != arity) {
      throw std::runtime_error(path + ": ragged row at line " + std::to_string(line_no) +
                               " (expected " + std::to_string(arity) + " fields, got " +
                               std::to_string(fields.size()) + ")");
    }

    const double raw_label = parse_number(fields[0], path, line_no);
    const long long label_key = std::llround(raw_label);
    if (std::abs(raw_label - static_cast<double>(label_key)) > 1e-9) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": class label must be integer-valued, got '" +
                               std::string(fields[0]) + "'");
    }

    TimeSeries t(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      t[i - 1] = parse_number(fields[i], path, line_no);
    }

    const auto [it, inserted] =
        label_ids.try_emplace(label_key, static_cast<int>(label_ids.size()));
    (void)inserted;
    dataset.labels.push_back(it->second);
    dataset.original_labels.push_back(raw_label);
    dataset.series.push_back(std::move(t));
  }

  dataset.length = arity > 0 ? arity - 1 : 0;
  dataset.class_count = static_cast<int>(label_ids.size());
  if (dataset.size() < 2 || dataset.length < 4) {
    throw std::runtime_error(path + ": dataset too small (need at least 2 rows and series length >= 4, got " +
                             std::to_string(dataset.size()) + " rows of length " +
                             std::to_string(dataset.length) + ")");
  }
  return dataset;
}

void write_ucr_tsv(const std::string& path, const LabeledDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::string buf;
  for (int i = 0; i < dataset.size(); ++i) {
    buf.clear();
    if (!dataset.original_labels.empty()) {
      render_label(buf, dataset.original_labels[static_cast<std::size_t>(i)]);
    } else {
      buf += std::to_string(dataset.labels[static_cast<std::size_t>(i)]);
    }
    for (const double v : dataset.series[static_cast<std::size_t>(i)]) {
      buf += '\t';
      render_value(buf, v);
    }
    buf += '\n';
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

TimeSeries znormalize(const TimeSeries& t) {
  const auto n = static_cast<double>(t.size());
  if (t.empty()) return t;
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : t) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  TimeSeries out(t.size());
  if (sd < 1e-12) return out;  // zeros
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = (t[i] - mean) / sd;
  return out;
}

void znormalize(LabeledDataset& dataset) {
  for (auto& t : dataset.series) t = znormalize(t);
}

std::pair<std::vector<int>, std::vector<int>> split_indices(int n, double fraction,
                                                            std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("holdout fraction must be in (0, 1), got " +
                                std::to_string(fraction));
  }
  if (n < 2) throw std::invalid_argument("need at least 2 items to split, got " + std::to_string(n));
  const int held = std::max(1, static_cast<int>(std::lround(fraction * n)));
  if (held >= n) {
    throw std::invalid_argument("holdout of " + std::to_string(held) + " items from " +
                                std::to_string(n) + " leaves nothing to keep");
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Engine rng(seed);
  rng.shuffle(order);

  std::vector<int> held_out(order.begin(), order.begin() + held);
  std::vector<int> kept(order.begin() + held, order.end());
  std::sort(held_out.begin(), held_out.end());
  std::sort(kept.begin(), kept.end());
  return {std::move(kept), std::move(held_out)};
}

namespace {

LabeledDataset subset(const LabeledDataset& d, const std::vector<int>& indices) {
  LabeledDataset out;
  out.length = d.length;
  out.class_count = d.class_count;
  out.series.reserve(indices.size());
  out.labels.reserve(indices.size());
  out.original_labels.reserve(indices.size());
  for (const int i : indices) {
    out.series.push_back(d.series[static_cast<std::size_t>(i)]);
    out.labels.push_back(d.labels[static_cast<std::size_t>(i)]);
    if (!d.original_labels.empty()) {
      out.original_labels.push_back(d.original_labels[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> holdout_split(const LabeledDataset& dataset,
                                                        double fraction, std::uint64_t seed) {
  const auto [kept, held_out] = split_indices(dataset.size(), fraction, seed);
  return {subset(dataset, kept), subset(dataset, held_out)};
}

}  // namespace wartem
