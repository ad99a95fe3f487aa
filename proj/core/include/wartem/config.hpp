#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wartem {

/// Plain `key = value` configuration with `#` comments. Typed getters record
/// every resolved value (defaults included) so a run can echo its full
/// effective configuration into a provenance record. Keys that are parsed but
/// never read are rejected by fail_on_unknown().
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& origin = "<config>");

  bool has(const std::string& key) const;

  /// Required getters throw "missing config key '<key>'".
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  long long get_int(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);

  /// Comma-separated unsigned integers, e.g. "1,2,3".
  std::vector<std::uint64_t> get_seed_list(const std::string& key);

  /// Throws when any parsed key was never consumed by a getter.
  void fail_on_unknown() const;

  /// Every key accessed so far with its final (possibly defaulted) value, in
  /// access order.
  const std::vector<std::pair<std::string, std::string>>& resolved() const { return resolved_; }

 private:
  std::string take(const std::string& key);  // marks the key as consumed
  void record(const std::string& key, std::string value);

  std::string origin_ = "<config>";
  std::vector<std::pair<std::string, std::string>> items_;  // parse order
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> consumed_;
  std::vector<std::pair<std::string, std::string>> resolved_;
};

/// FNV-1a 64-bit hash rendered as 16 hex digits; used to fingerprint a
/// resolved configuration.
std::string fnv1a_hex(std::string_view text);

}  // namespace wartem
