#include "rasim/rf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rasim {

double solve_pattern_exponent(double hpbw_rad) {
  if (!(hpbw_rad > 0.0 && hpbw_rad < kPi)) {
    throw std::domain_error("solve_pattern_exponent: beamwidth must lie in (0, pi)");
  }
  return std::log(0.5) / std::log(std::cos(hpbw_rad / 2.0));
}

PatternModel make_pattern(const AntennaSpec& spec) {
  PatternModel m;
  m.exponent_n = spec.calibration_exponent > 0.0 ? spec.calibration_exponent
                                                 : solve_pattern_exponent(spec.hpbw_rad);
  m.peak_gain_dbi = spec.peak_gain_dbi;
  m.sidelobe_floor_dbi = spec.sidelobe_floor_dbi;
  m.hpbw_rad = spec.hpbw_rad;
  return m;
}

double pattern_gain_db(const PatternModel& model, double offset_rad) {
  const double off = std::abs(wrap_angle(offset_rad));
  if (off >= kPi / 2.0) return model.sidelobe_floor_dbi;
  const double mainlobe = model.peak_gain_dbi + 10.0 * model.exponent_n * std::log10(std::cos(off));
  return std::max(mainlobe, model.sidelobe_floor_dbi);
}

double fspl_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0) || !(carrier_hz > 0.0)) {
    throw std::domain_error("fspl_db: distance and carrier must be positive");
  }
  return 20.0 * std::log10(4.0 * kPi * distance_m * carrier_hz / kSpeedOfLight);
}

const char* to_string(LinkMode mode) { return mode == LinkMode::Ra ? "RA" : "FIXED"; }

LinkSample link_budget(const Scenario& scn, const PatternModel& pattern, double boresight_rad,
                       const Pose& rx, LinkMode mode, double t_s) {
  LinkSample s;
  s.t_s = t_s;
  s.mode = mode;
  s.rx_azimuth_rad = rx.azimuth_rad;
  s.boresight_rad = mode == LinkMode::Fixed ? 0.0 : boresight_rad;
  s.offset_rad = wrap_angle(rx.azimuth_rad - s.boresight_rad);
  s.tx_gain_dbi = pattern_gain_db(pattern, s.offset_rad);
  s.fspl_db = fspl_db(rx.range_m, scn.carrier_hz);
  s.rx_power_dbm = scn.tx_power_dbm + s.tx_gain_dbi + scn.antenna.rx_gain_dbi - s.fspl_db;
  s.snr_db = s.rx_power_dbm - scn.noise_floor_dbm;
  return s;
}

}  // namespace rasim
