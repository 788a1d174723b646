#include "minlift/random.hpp"

#include <cmath>
#include <numbers>

namespace minlift {

std::uint64_t CounterRng::at(std::uint64_t counter) const {
  std::uint64_t z = seed_ * 0x9E3779B97F4A7C15ULL + counter;
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  // 53 random bits mapped to the open interval (0, 1).
  return (static_cast<double>(at(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace minlift
