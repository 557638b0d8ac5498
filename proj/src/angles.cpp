#include "rasim/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace rasim {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::domain_error("wrap_angle: non-finite angle");
  }
  // remainder() is exact and lands in [-pi, pi]; fold the -pi end over.
  double r = std::remainder(theta, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

double wrap_angle_positive(double theta) {
  double r = wrap_angle(theta);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double symbol_rate(double bit_rate_bps, unsigned bits_per_symbol) {
  if (bits_per_symbol == 0) {
    throw std::invalid_argument("symbol_rate: bits_per_symbol must be >= 1");
  }
  return bit_rate_bps / static_cast<double>(bits_per_symbol);
}

}  // namespace rasim
