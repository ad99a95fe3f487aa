#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace wartem {

// SplitMix64 step. Used for seed derivation, not as a stream generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for stream `stream` of a parent seed. Every component that
// needs an independent random stream derives it through this, so runs are
// replayable from a single top-level seed.
inline std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t stream) {
  std::uint64_t state = parent ^ (stream * 0xd1b54a32d192ed03ULL + 0x9e3779b97f4a7c15ULL);
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  return a ^ (b >> 1);
}

inline std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t s1, std::uint64_t s2) {
  return mix_seed(mix_seed(parent, s1), s2);
}

// mt19937_64 with explicit draw helpers. The standard distributions are
// implementation-defined, so every draw used by the pipeline is spelled out
// here; identical seeds replay identical streams on any conforming compiler.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on {lo, ..., hi}, both ends inclusive. Rejection keeps it unbiased.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - static_cast<std::int64_t>(lo)) + 1;
    const std::uint64_t threshold = (0 - span) % span;
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return lo + static_cast<int>(x % span);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  // Standard normal via Box-Muller (pinned, unlike std::normal_distribution).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_real();
    while (u1 <= 0.0) u1 = uniform_real();
    const double u2 = uniform_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Fisher-Yates with the pinned uniform_int.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wartem
