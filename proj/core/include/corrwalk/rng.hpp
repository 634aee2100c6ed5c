#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

namespace corrwalk {

/// Anything that yields iid uniforms on [0, 1) when called.
template <typename S>
concept UniformSource = requires(S& s) {
  { s() } -> std::convertible_to<double>;
};

/// SplitMix64 finalizer; used to spread master seeds into sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-seed for stream `index` of a run seeded with `master`. Streams are
/// a pure function of (master, index), so the work split never matters.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// 64-bit Mersenne Twister with a fixed, portable uniform mapping (the top
/// 53 bits), so a seed reproduces the same doubles on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform() { return (*this)(); }
  bool bernoulli(double prob) { return (*this)() < prob; }

  /// Standard normal via the polar method (two per pair; one cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = y * f;
  has_cached_ = true;
  return x * f;
}

}  // namespace corrwalk
