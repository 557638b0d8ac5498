#ifndef RASIM_ANGLES_HPP
#define RASIM_ANGLES_HPP

#include <numbers>

namespace rasim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Maps theta onto (-pi, pi]. Throws std::domain_error for non-finite input.
double wrap_angle(double theta);

// Maps theta onto [0, 2*pi).
double wrap_angle_positive(double theta);

// Bits per second over bits per symbol. Throws std::invalid_argument when
// bits_per_symbol is zero.
double symbol_rate(double bit_rate_bps, unsigned bits_per_symbol);

}  // namespace rasim

#endif  // RASIM_ANGLES_HPP
