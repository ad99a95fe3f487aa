#include "wartem/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wartem {

namespace {

std::string trim(std::string_view s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && (s[lo] == ' ' || s[lo] == '\t')) ++lo;
  while (hi > lo && (s[hi - 1] == ' ' || s[hi - 1] == '\t' || s[hi - 1] == '\r')) --hi;
  return std::string(s.substr(lo, hi - lo));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& origin) {
  KeyValueConfig config;
  config.origin_ = origin;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (config.values_.count(key) != 0) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                               key + "'");
    }
    config.values_[key] = value;
    config.consumed_[key] = false;
    config.items_.emplace_back(key, value);
  }
  return config;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string KeyValueConfig::take(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::runtime_error(origin_ + ": missing config key '" + key + "'");
  }
  consumed_[key] = true;
  return it->second;
}

void KeyValueConfig::record(const std::string& key, std::string value) {
  for (auto& item : resolved_) {
    if (item.first == key) {
      item.second = std::move(value);
      return;
    }
  }
  resolved_.emplace_back(key, std::move(value));
}

std::string KeyValueConfig::get_string(const std::string& key) {
  std::string value = take(key);
  record(key, value);
  return value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) {
    record(key, fallback);
    return fallback;
  }
  return get_string(key);
}

long long KeyValueConfig::get_int(const std::string& key) {
  const std::string value = take(key);
  long long parsed = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::runtime_error(origin_ + ": config key '" + key + "' expects an integer, got '" +
                             value + "'");
  }
  record(key, value);
  return parsed;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) {
  if (!has(key)) {
    record(key, std::to_string(fallback));
    return fallback;
  }
  return get_int(key);
}

double KeyValueConfig::get_double(const std::string& key) {
  const std::string value = take(key);
  double parsed = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::runtime_error(origin_ + ": config key '" + key + "' expects a number, got '" +
                             value + "'");
  }
  record(key, value);
  return parsed;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) {
  if (!has(key)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", fallback);
    record(key, buf);
    return fallback;
  }
  return get_double(key);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) {
    record(key, fallback ? "true" : "false");
    return fallback;
  }
  const std::string value = take(key);
  bool parsed;
  if (value == "true" || value == "1" || value == "yes") {
    parsed = true;
  } else if (value == "false" || value == "0" || value == "no") {
    parsed = false;
  } else {
    throw std::runtime_error(origin_ + ": config key '" + key + "' expects a boolean, got '" +
                             value + "'");
  }
  record(key, parsed ? "true" : "false");
  return parsed;
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    record(key, std::to_string(fallback));
    return fallback;
  }
  const std::string value = take(key);
  std::uint64_t parsed = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::runtime_error(origin_ + ": config key '" + key +
                             "' expects an unsigned integer, got '" + value + "'");
  }
  record(key, value);
  return parsed;
}

std::vector<std::uint64_t> KeyValueConfig::get_seed_list(const std::string& key) {
  const std::string value = take(key);
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) comma = value.size();
    const std::string field = trim(std::string_view(value).substr(start, comma - start));
    if (field.empty()) {
      throw std::runtime_error(origin_ + ": config key '" + key + "' has an empty entry");
    }
    std::uint64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), parsed);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::runtime_error(origin_ + ": config key '" + key +
                               "' expects comma-separated unsigned integers, got '" + field + "'");
    }
    seeds.push_back(parsed);
    start = comma + 1;
    if (comma == value.size()) break;
  }
  record(key, value);
  return seeds;
}

void KeyValueConfig::fail_on_unknown() const {
  std::string unknown;
  for (const auto& [key, value] : items_) {
    (void)value;
    if (!consumed_.at(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += "'" + key + "'";
    }
  }
  if (!unknown.empty()) {
    throw std::runtime_error(origin_ + ": unknown config key(s): " + unknown);
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace wartem
