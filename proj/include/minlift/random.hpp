#pragma once

#include <cstdint>

namespace minlift {

/// Counter-based 64-bit generator: the SplitMix64 finaliser applied to
/// seed * golden + counter. Draw i depends only on (seed, i), so results do
/// not depend on evaluation order or the standard library in use.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t at(std::uint64_t counter) const;
  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
};

/// Sequential standard normal draws via Box-Muller over a CounterRng.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next();
  double uniform() { return rng_.uniform(counter_++); }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace minlift
