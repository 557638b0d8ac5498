#ifndef RASIM_RF_HPP
#define RASIM_RF_HPP

#include "rasim/lidar.hpp"
#include "rasim/scenario.hpp"

namespace rasim {

inline constexpr double kSpeedOfLight = 299'792'458.0;

// cos^n mainlobe with a hard sidelobe floor.
struct PatternModel {
  double exponent_n = 0.0;
  double peak_gain_dbi = 10.0;
  double sidelobe_floor_dbi = -10.0;
  double hpbw_rad = kPi / 3.0;
};

// n = ln(0.5) / ln(cos(hpbw/2)), so that cos^n is 3 dB down at +-hpbw/2.
// Throws std::domain_error unless 0 < hpbw < pi.
double solve_pattern_exponent(double hpbw_rad);

// Uses calibration_exponent when it is set, otherwise solves from hpbw.
PatternModel make_pattern(const AntennaSpec& spec);

double pattern_gain_db(const PatternModel& model, double offset_rad);

// Friis free-space loss 20*log10(4*pi*d*f/c). Throws std::domain_error on
// non-positive inputs.
double fspl_db(double distance_m, double carrier_hz);

enum class LinkMode { Ra, Fixed };

const char* to_string(LinkMode mode);

struct LinkSample {
  double t_s = 0.0;
  double rx_azimuth_rad = 0.0;
  double boresight_rad = 0.0;
  double offset_rad = 0.0;
  double tx_gain_dbi = 0.0;
  double fspl_db = 0.0;
  double rx_power_dbm = 0.0;
  double snr_db = 0.0;
  LinkMode mode = LinkMode::Ra;
};

// FIXED mode ignores boresight_rad and points at 0.
LinkSample link_budget(const Scenario& scn, const PatternModel& pattern, double boresight_rad,
                       const Pose& rx, LinkMode mode, double t_s = 0.0);

}  // namespace rasim

#endif  // RASIM_RF_HPP
