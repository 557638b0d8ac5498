#ifndef RASIM_COMMANDS_HPP
#define RASIM_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rasim/scenario.hpp"

namespace rasim::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kIoError = 2 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;  // empty: built-in defaults
  std::optional<std::uint64_t> seed;
  std::string out;
};

// Reads and validates the config file, applying a --seed override.
// Throws IoError or ConfigError.
Scenario load_config(const CommonOptions& common);

// "start:stop:step" in degrees, inclusive of stop. Throws std::invalid_argument.
std::vector<double> parse_angles_deg(const std::string& spec);

// "AZxRANGE", e.g. "360x24". Throws std::invalid_argument.
std::pair<std::size_t, std::size_t> parse_bins(const std::string& spec);

struct SweepOptions {
  CommonOptions common;
  std::string angles = "-60:60:10";
  double settle_s = 3.0;
};

struct ConstellationOptions {
  CommonOptions common;  // out names a directory
  double azimuth_deg = 60.0;
  std::size_t n_symbols = 4096;
  std::optional<double> calibration_exponent;
};

struct RadarMapOptions {
  std::string cluster_file;
  std::string bins = "360x24";
  double max_range_m = 12.0;
  std::string out = "radar_map.pgm";
};

struct LidarDecodeOptions {
  std::string cluster_file;
  std::string out;  // empty: stdout
};

struct LidarScanOptions {
  CommonOptions common;
  double azimuth_deg = 60.0;
  double range_m = 4.0;
  std::size_t scans = 100;
};

struct LoopTraceOptions {
  CommonOptions common;  // empty out: stdout
  double azimuth_deg = 60.0;
  double duration_s = 5.0;
};

// Each returns an ExitCode; human-readable output goes to `out`, failures to `err`.
int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);
int cmd_constellation(const ConstellationOptions& opt, std::ostream& out, std::ostream& err);
int cmd_radar_map(const RadarMapOptions& opt, std::ostream& out, std::ostream& err);
int cmd_lidar_decode(const LidarDecodeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_lidar_scan(const LidarScanOptions& opt, std::ostream& out, std::ostream& err);
int cmd_loop_trace(const LoopTraceOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace rasim::cli

#endif  // RASIM_COMMANDS_HPP
