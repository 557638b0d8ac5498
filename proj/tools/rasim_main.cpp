// rasim: command-line frontend for the rotatable-antenna link simulator.

#include <iostream>

#include "CLI11.hpp"
#include "rasim/commands.hpp"

namespace {

void add_common(CLI::App* cmd, rasim::cli::CommonOptions& common, const std::string& out_help) {
  cmd->add_option("--config", common.config_path, "Scenario file (key = value lines)");
  cmd->add_option("--seed", common.seed, "Random seed (overrides the config)");
  cmd->add_option("--out", common.out, out_help);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rasim::cli;

  CLI::App app{"Radar-sensing-aided rotatable antenna link simulator"};
  app.require_subcommand(1);

  int status = kOk;

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "SNR versus RX azimuth for RA and fixed antennas");
  add_common(sweep_cmd, sweep.common, "Output CSV path");
  sweep_cmd->add_option("--angles", sweep.angles, "start:stop:step in degrees")
      ->capture_default_str();
  sweep_cmd->add_option("--settle", sweep.settle_s, "Settle time per angle, seconds")
      ->capture_default_str();
  sweep_cmd->callback([&] { status = cmd_sweep(sweep, std::cout, std::cerr); });

  ConstellationOptions cons;
  auto* cons_cmd =
      app.add_subcommand("constellation", "16-QAM constellations for RA and fixed antennas");
  add_common(cons_cmd, cons.common, "Output directory");
  cons_cmd->add_option("--azimuth", cons.azimuth_deg, "RX azimuth, degrees")->capture_default_str();
  cons_cmd->add_option("--symbols", cons.n_symbols, "Symbols per frame (>= 1000)")
      ->capture_default_str();
  cons_cmd->add_option("--calibration-exponent", cons.calibration_exponent,
                       "cos^n exponent override for the TX pattern");
  cons_cmd->callback([&] { status = cmd_constellation(cons, std::cout, std::cerr); });

  RadarMapOptions map;
  auto* map_cmd = app.add_subcommand("radar-map", "Polar radar image from a frame file");
  map_cmd->add_option("clusters", map.cluster_file, "Newline-delimited hex frames")->required();
  map_cmd->add_option("--bins", map.bins, "AZxRANGE bin counts")->capture_default_str();
  map_cmd->add_option("--max-range", map.max_range_m, "Range covered, meters")->capture_default_str();
  map_cmd->add_option("--out", map.out, "Output PGM path")->capture_default_str();
  map_cmd->callback([&] { status = cmd_radar_map(map, std::cout, std::cerr); });

  auto* lidar_cmd = app.add_subcommand("lidar", "Detection frame tools");
  lidar_cmd->require_subcommand(1);

  LidarDecodeOptions decode;
  auto* decode_cmd = lidar_cmd->add_subcommand("decode", "Decode hex frames to CSV");
  decode_cmd->add_option("file", decode.cluster_file, "Newline-delimited hex frames")->required();
  decode_cmd->add_option("--out", decode.out, "Output CSV path (default stdout)");
  decode_cmd->callback([&] { status = cmd_lidar_decode(decode, std::cout, std::cerr); });

  LidarScanOptions scan;
  auto* scan_cmd = lidar_cmd->add_subcommand("scan", "Simulate scans and write hex frames");
  add_common(scan_cmd, scan.common, "Output frame file");
  scan_cmd->add_option("--azimuth", scan.azimuth_deg, "Target azimuth, degrees")
      ->capture_default_str();
  scan_cmd->add_option("--range", scan.range_m, "Target range, meters")->capture_default_str();
  scan_cmd->add_option("--scans", scan.scans, "Number of scan cycles")->capture_default_str();
  scan_cmd->callback([&] { status = cmd_lidar_scan(scan, std::cout, std::cerr); });

  LoopTraceOptions trace;
  auto* trace_cmd = app.add_subcommand("loop-trace", "Closed-loop servo trace CSV");
  add_common(trace_cmd, trace.common, "Output CSV path (default stdout)");
  trace_cmd->add_option("--azimuth", trace.azimuth_deg, "RX azimuth, degrees")
      ->capture_default_str();
  trace_cmd->add_option("--duration", trace.duration_s, "Simulated seconds")->capture_default_str();
  trace_cmd->callback([&] { status = cmd_loop_trace(trace, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationError;
  }
  return status;
}
