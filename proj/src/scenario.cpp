#include "rasim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

namespace rasim {

namespace {

enum class FieldType { Real, Unsigned, Integer };

struct Field {
  const char* key;
  FieldType type;
  std::function<double&(Scenario&)> real;
  std::function<std::uint64_t&(Scenario&)> unsigned_value = {};
  std::function<int&(Scenario&)> integer = {};
};

template <typename Member>
Field real_field(const char* key, Member member) {
  return {key, FieldType::Real, member};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real_field("carrier_hz", [](Scenario& s) -> double& { return s.carrier_hz; }));
    f.push_back(real_field("tx_power_dbm", [](Scenario& s) -> double& { return s.tx_power_dbm; }));
    f.push_back(real_field("bandwidth_hz", [](Scenario& s) -> double& { return s.bandwidth_hz; }));
    f.push_back(
        real_field("noise_floor_dbm", [](Scenario& s) -> double& { return s.noise_floor_dbm; }));
    f.push_back(real_field("bit_rate_bps", [](Scenario& s) -> double& { return s.bit_rate_bps; }));
    f.push_back(
        real_field("link_distance_m", [](Scenario& s) -> double& { return s.link_distance_m; }));
    f.push_back(
        real_field("rotation_min_rad", [](Scenario& s) -> double& { return s.rotation_min_rad; }));
    f.push_back(
        real_field("rotation_max_rad", [](Scenario& s) -> double& { return s.rotation_max_rad; }));
    f.push_back(real_field("radar_scan_hz", [](Scenario& s) -> double& { return s.radar_scan_hz; }));
    f.push_back(real_field("aoa_window_s", [](Scenario& s) -> double& { return s.aoa_window_s; }));
    f.push_back(
        real_field("control_rate_hz", [](Scenario& s) -> double& { return s.control_rate_hz; }));
    f.push_back({"seed", FieldType::Unsigned, {}, [](Scenario& s) -> std::uint64_t& { return s.seed; }});

    f.push_back(
        real_field("peak_gain_dbi", [](Scenario& s) -> double& { return s.antenna.peak_gain_dbi; }));
    f.push_back(real_field("hpbw_rad", [](Scenario& s) -> double& { return s.antenna.hpbw_rad; }));
    f.push_back(real_field("sidelobe_floor_dbi",
                           [](Scenario& s) -> double& { return s.antenna.sidelobe_floor_dbi; }));
    f.push_back(
        real_field("rx_gain_dbi", [](Scenario& s) -> double& { return s.antenna.rx_gain_dbi; }));
    f.push_back(real_field("calibration_exponent",
                           [](Scenario& s) -> double& { return s.antenna.calibration_exponent; }));

    f.push_back(real_field("angular_resolution_rad",
                           [](Scenario& s) -> double& { return s.radar.angular_resolution_rad; }));
    f.push_back(real_field("aoa_noise_std_rad",
                           [](Scenario& s) -> double& { return s.radar.aoa_noise_std_rad; }));
    f.push_back(real_field("range_noise_std_m",
                           [](Scenario& s) -> double& { return s.radar.range_noise_std_m; }));
    f.push_back(
        real_field("range_gate_m", [](Scenario& s) -> double& { return s.radar.range_gate_m; }));
    f.push_back({"intensity_threshold", FieldType::Integer, {}, {},
                 [](Scenario& s) -> int& { return s.radar.intensity_threshold; }});

    f.push_back(real_field("kp", [](Scenario& s) -> double& { return s.gains.kp; }));
    f.push_back(real_field("ki", [](Scenario& s) -> double& { return s.gains.ki; }));
    f.push_back(real_field("kd", [](Scenario& s) -> double& { return s.gains.kd; }));
    f.push_back(
        real_field("integral_limit", [](Scenario& s) -> double& { return s.gains.integral_limit; }));
    f.push_back(real_field("output_limit_rad",
                           [](Scenario& s) -> double& { return s.gains.output_limit_rad; }));

    f.push_back(real_field("slew_rate_rad_s",
                           [](Scenario& s) -> double& { return s.servo.slew_rate_rad_s; }));
    f.push_back(real_field("pwm_min_us", [](Scenario& s) -> double& { return s.servo.pwm_min_us; }));
    f.push_back(real_field("pwm_max_us", [](Scenario& s) -> double& { return s.servo.pwm_max_us; }));
    f.push_back(
        real_field("pwm_quantum_us", [](Scenario& s) -> double& { return s.servo.pwm_quantum_us; }));
    return f;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(const std::string& key, std::size_t line_no, const std::string& msg) {
  throw ConfigError(ConfigError::Kind::Parse, key,
                    "config line " + std::to_string(line_no) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view value, const std::string& key, std::size_t line_no) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (!value.empty() && value.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || first == last) {
    parse_fail(key, line_no, "value '" + std::string(value) + "' for key '" + key +
                                 "' is not a valid number");
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  throw ConfigError(ConfigError::Kind::Validation, key, key + ": " + msg);
}

void require_positive(const char* key, double v) {
  if (!(std::isfinite(v) && v > 0.0)) invalid(key, "must be finite and > 0");
}

void require_non_negative(const char* key, double v) {
  if (!(std::isfinite(v) && v >= 0.0)) invalid(key, "must be finite and >= 0");
}

}  // namespace

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

void validate(const Scenario& s) {
  Scenario copy = s;
  for (const auto& f : fields()) {
    if (f.type != FieldType::Real) continue;
    if (!std::isfinite(f.real(copy))) invalid(f.key, "must be finite");
  }
  if (!(s.rotation_min_rad < s.rotation_max_rad)) {
    invalid("rotation_min_rad/rotation_max_rad", "rotation bounds inverted (min must be < max)");
  }
  if (s.rotation_min_rad < -kPi || s.rotation_max_rad > kPi) {
    invalid("rotation_min_rad/rotation_max_rad", "rotation bounds must lie within [-pi, pi]");
  }
  require_positive("carrier_hz", s.carrier_hz);
  require_positive("bandwidth_hz", s.bandwidth_hz);
  require_positive("bit_rate_bps", s.bit_rate_bps);
  require_positive("link_distance_m", s.link_distance_m);
  require_positive("radar_scan_hz", s.radar_scan_hz);
  require_positive("control_rate_hz", s.control_rate_hz);
  require_positive("aoa_window_s", s.aoa_window_s);
  if (s.aoa_window_s * s.radar_scan_hz < 1.0 - 1e-9) {
    invalid("aoa_window_s", "window must hold at least one radar scan");
  }

  const AntennaSpec& a = s.antenna;
  if (!(a.hpbw_rad > 0.0 && a.hpbw_rad < kPi)) invalid("hpbw_rad", "must lie in (0, pi)");
  if (!(a.sidelobe_floor_dbi < a.peak_gain_dbi)) {
    invalid("sidelobe_floor_dbi", "must be below peak_gain_dbi");
  }
  require_non_negative("calibration_exponent", a.calibration_exponent);

  require_positive("angular_resolution_rad", s.radar.angular_resolution_rad);
  require_non_negative("aoa_noise_std_rad", s.radar.aoa_noise_std_rad);
  require_non_negative("range_noise_std_m", s.radar.range_noise_std_m);
  require_positive("range_gate_m", s.radar.range_gate_m);
  if (s.radar.intensity_threshold < 0 || s.radar.intensity_threshold > 255) {
    invalid("intensity_threshold", "must lie in [0, 255]");
  }

  require_non_negative("kp", s.gains.kp);
  require_non_negative("ki", s.gains.ki);
  require_non_negative("kd", s.gains.kd);
  require_positive("integral_limit", s.gains.integral_limit);
  require_positive("output_limit_rad", s.gains.output_limit_rad);

  require_positive("slew_rate_rad_s", s.servo.slew_rate_rad_s);
  if (!(s.servo.pwm_min_us < s.servo.pwm_max_us)) invalid("pwm_min_us", "must be below pwm_max_us");
  require_positive("pwm_quantum_us", s.servo.pwm_quantum_us);
}

Scenario load_scenario(std::string_view text) {
  Scenario scn;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail("", line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail("", line_no, "missing key");

    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (key == f.key) field = &f;
    }
    if (!field) parse_fail(key, line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) parse_fail(key, line_no, "duplicate key '" + key + "'");

    switch (field->type) {
      case FieldType::Real: field->real(scn) = parse_number<double>(value, key, line_no); break;
      case FieldType::Unsigned:
        field->unsigned_value(scn) = parse_number<std::uint64_t>(value, key, line_no);
        break;
      case FieldType::Integer: field->integer(scn) = parse_number<int>(value, key, line_no); break;
    }
  }
  validate(scn);
  return scn;
}

std::string to_config_text(const Scenario& s) {
  Scenario copy = s;
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    switch (f.type) {
      case FieldType::Real: out += format_real(f.real(copy)); break;
      case FieldType::Unsigned: out += std::to_string(f.unsigned_value(copy)); break;
      case FieldType::Integer: out += std::to_string(f.integer(copy)); break;
    }
    out += '\n';
  }
  return out;
}

std::string config_hash(const Scenario& scn) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_config_text(scn)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rasim
