#ifndef RASIM_SCENARIO_HPP
#define RASIM_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rasim/angles.hpp"
#include "rasim/control.hpp"
#include "rasim/lidar.hpp"

namespace rasim {

struct AntennaSpec {
  double peak_gain_dbi = 10.0;
  double hpbw_rad = kPi / 3.0;
  double sidelobe_floor_dbi = -10.0;
  double rx_gain_dbi = 2.15;  // half-wave dipole
  // Overrides the cos^n exponent derived from hpbw_rad when > 0.
  double calibration_exponent = 0.0;
  bool operator==(const AntennaSpec&) const = default;
};

// Full bench configuration. Defaults reproduce the 4 m, 5.8 GHz, 16-QAM setup.
struct Scenario {
  double carrier_hz = 5.8e9;
  double tx_power_dbm = 10.0;
  double bandwidth_hz = 1.0e5;
  double noise_floor_dbm = -95.0;
  double bit_rate_bps = 5.0e5;
  double link_distance_m = 4.0;
  double rotation_min_rad = -kPi / 2.0;
  double rotation_max_rad = kPi / 2.0;
  double radar_scan_hz = 10.0;
  double aoa_window_s = 1.0;
  double control_rate_hz = 50.0;
  std::uint64_t seed = 1;

  AntennaSpec antenna;
  RadarModel radar;
  PidGains gains;
  ServoModel servo;

  RotationLimits limits() const { return {rotation_min_rad, rotation_max_rad}; }
  bool operator==(const Scenario&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };

  ConfigError(Kind kind, std::string key, const std::string& what)
      : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

// Parses `key = value` lines; `#` starts a comment. Omitted keys keep their
// defaults, unknown keys are rejected. Throws ConfigError.
Scenario load_scenario(std::string_view text);

// Canonical text form; load_scenario(to_config_text(s)) == s.
std::string to_config_text(const Scenario& scn);

// Throws ConfigError(Validation) naming the first offending key.
void validate(const Scenario& scn);

// Every key load_scenario accepts, in canonical order.
std::vector<std::string> scenario_keys();

// FNV-1a 64 of the canonical config text, as 16 hex digits.
std::string config_hash(const Scenario& scn);

}  // namespace rasim

#endif  // RASIM_SCENARIO_HPP
