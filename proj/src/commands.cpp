#include "rasim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "rasim/control.hpp"
#include "rasim/lidar.hpp"
#include "rasim/modem.hpp"
#include "rasim/radar_map.hpp"
#include "rasim/sim.hpp"

namespace rasim::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("error writing '" + path + "'");
}

void write_metadata(std::ostream& os, const char* command, const Scenario& scn) {
  os << "# rasim " << command << "\n# seed=" << scn.seed << "\n# config_hash=" << config_hash(scn)
     << '\n';
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Maps exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

}  // namespace

Scenario load_config(const CommonOptions& common) {
  Scenario scn = common.config_path.empty() ? Scenario{} : load_scenario(read_file(common.config_path));
  if (common.seed) scn.seed = *common.seed;
  return scn;
}

std::vector<double> parse_angles_deg(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw std::invalid_argument("angles must be start:stop:step in degrees, got '" + spec + "'");
  }
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("angles need step > 0 and start <= stop");
  }
  std::vector<double> out;
  const long n = std::lround(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::pair<std::size_t, std::size_t> parse_bins(const std::string& spec) {
  std::size_t az = 0, r = 0;
  char x = 0;
  std::istringstream in(spec);
  if (!(in >> az >> x >> r) || x != 'x' || !in.eof() || az == 0 || r == 0) {
    throw std::invalid_argument("bins must be AZxRANGE with positive counts, got '" + spec + "'");
  }
  return {az, r};
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_config(opt.common);
    std::vector<double> angles;
    for (double deg : parse_angles_deg(opt.angles)) angles.push_back(deg_to_rad(deg));
    if (opt.common.out.empty()) throw std::invalid_argument("sweep: --out is required");

    const SweepResult r = sweep_azimuth(scn, angles, opt.settle_s, scn.seed);
    std::ostringstream csv;
    write_metadata(csv, "sweep", scn);
    write_sweep_csv(csv, r);
    write_file(opt.common.out, csv.str());

    const auto [lo, hi] = std::minmax_element(r.snr_ra_db.begin(), r.snr_ra_db.end());
    out << "wrote " << r.azimuth_rad.size() << " rows to " << opt.common.out << '\n'
        << "RA snr min/max: " << fmt("%.3f", *lo) << " / " << fmt("%.3f", *hi) << " dB\n";
    const std::size_t ends[] = {0, r.azimuth_rad.size() - 1};
    for (std::size_t i : ends) {
      out << "fixed-antenna gap at " << fmt("%.1f", rad_to_deg(r.azimuth_rad[i])) << " deg: "
          << fmt("%.3f", r.snr_ra_db[i] - r.snr_fixed_db[i]) << " dB\n";
      if (ends[1] == 0) break;
    }
    return kOk;
  });
}

int cmd_constellation(const ConstellationOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scenario scn = load_config(opt.common);
    if (opt.calibration_exponent) {
      scn.antenna.calibration_exponent = *opt.calibration_exponent;
      validate(scn);
    }
    if (opt.common.out.empty()) throw std::invalid_argument("constellation: --out is required");

    const ConstellationExperiment exp =
        constellation_experiment(scn, deg_to_rad(opt.azimuth_deg), opt.n_symbols, scn.seed);

    std::error_code ec;
    std::filesystem::create_directories(opt.common.out, ec);
    if (ec) throw IoError("cannot create directory '" + opt.common.out + "'");
    const std::filesystem::path dir(opt.common.out);

    for (const auto& [name, frame] :
         {std::pair{"constellation_ra.csv", &exp.ra}, std::pair{"constellation_fixed.csv", &exp.fixed}}) {
      std::ostringstream csv;
      write_metadata(csv, "constellation", scn);
      write_constellation_csv(csv, *frame);
      write_file((dir / name).string(), csv.str());
    }

    std::ostringstream summary;
    summary << "azimuth_deg: " << fmt("%.3f", opt.azimuth_deg) << '\n'
            << "pattern_exponent: " << fmt("%.4f", make_pattern(scn.antenna).exponent_n) << '\n'
            << "rx_power_ra_dbm: " << fmt("%.4f", exp.rx_power_ra_dbm) << '\n'
            << "rx_power_fixed_dbm: " << fmt("%.4f", exp.rx_power_fixed_dbm) << '\n'
            << "rx_power_delta_db: " << fmt("%.4f", exp.power_delta_db()) << '\n'
            << "snr_ra_db: " << fmt("%.4f", exp.ra.snr_db_applied) << '\n'
            << "snr_fixed_db: " << fmt("%.4f", exp.fixed.snr_db_applied) << '\n'
            << "evm_ra: " << fmt("%.6e", exp.ra.evm_rms) << '\n'
            << "evm_fixed: " << fmt("%.6e", exp.fixed.evm_rms) << '\n'
            << "ber_ra: " << fmt("%.6e", exp.ra.ber) << '\n'
            << "ber_fixed: " << fmt("%.6e", exp.fixed.ber) << '\n';
    write_file((dir / "summary.txt").string(), summary.str());
    out << summary.str();
    return kOk;
  });
}

int cmd_radar_map(const RadarMapOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto [az_bins, r_bins] = parse_bins(opt.bins);
    RadarMap map(az_bins, r_bins, opt.max_range_m);
    std::ifstream in = open_input(opt.cluster_file);
    const DecodedFile decoded = decode_cluster_stream(in);

    std::size_t outside = 0;
    for (const auto& c : decoded.clusters) outside += map.add(c) ? 0 : 1;

    out << "accepted: " << decoded.stats.accepted << '\n';
    for (auto kind : {DecodeErrorKind::BadLength, DecodeErrorKind::InvalidHex,
                      DecodeErrorKind::BadSync, DecodeErrorKind::ChecksumMismatch,
                      DecodeErrorKind::AzimuthOutOfRange}) {
      out << "rejected " << to_string(kind) << ": " << decoded.stats.rejected_of(kind) << '\n';
    }
    if (outside) out << "beyond max range: " << outside << '\n';
    if (decoded.stats.accepted == 0) {
      err << "error: no valid frames in '" << opt.cluster_file << "'\n";
      return static_cast<int>(kValidationError);
    }

    std::ostringstream pgm;
    map.write_pgm(pgm);
    write_file(opt.out, pgm.str());

    const auto cell = map.modal_cell();
    out << "modal bin: azimuth " << fmt("%.2f", map.azimuth_center_deg(cell.azimuth_bin))
        << " deg, range " << fmt("%.3f", map.range_center_m(cell.range_bin)) << " m, count "
        << cell.count << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_lidar_decode(const LidarDecodeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in = open_input(opt.cluster_file);
    const DecodedFile decoded = decode_cluster_stream(in);

    std::ostringstream csv;
    csv << "cycle,azimuth_deg,range_m,intensity\n";
    for (const auto& c : decoded.clusters) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%u,%.2f,%.3f,%u\n", static_cast<unsigned>(c.cycle_index),
                    c.azimuth_cdeg / 100.0, cluster_range_m(c), static_cast<unsigned>(c.intensity));
      csv << buf;
    }
    if (opt.out.empty()) {
      out << csv.str();
    } else {
      write_file(opt.out, csv.str());
    }
    if (decoded.stats.rejected_total() > 0) {
      err << "rejected " << decoded.stats.rejected_total() << " frame(s)\n";
    }
    if (decoded.stats.accepted == 0) {
      err << "error: no valid frames in '" << opt.cluster_file << "'\n";
      return static_cast<int>(kValidationError);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_lidar_scan(const LidarScanOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_config(opt.common);
    if (opt.common.out.empty()) throw std::invalid_argument("lidar scan: --out is required");
    const Pose truth{wrap_angle(deg_to_rad(opt.azimuth_deg)), opt.range_m};
    Rng rng(scn.seed);
    std::ostringstream frames;
    std::size_t n = 0;
    for (std::size_t i = 0; i < opt.scans; ++i) {
      for (const auto& c : simulate_scan(scn.radar, truth, static_cast<std::uint16_t>(i), rng)) {
        frames << encode_cluster(c) << '\n';
        ++n;
      }
    }
    write_file(opt.common.out, frames.str());
    out << "wrote " << n << " frames to " << opt.common.out << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_loop_trace(const LoopTraceOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_config(opt.common);
    const Pose rx{wrap_angle(deg_to_rad(opt.azimuth_deg)), scn.link_distance_m};
    const ClosedLoopRun run = run_closed_loop(scn, static_target(rx), opt.duration_s, scn.seed);

    std::vector<TrackSample> samples;
    samples.reserve(run.ticks.size());
    for (const auto& t : run.ticks) samples.push_back({t.t_s, t.setpoint_rad, t.error_rad, t.servo});

    std::ostringstream csv;
    write_metadata(csv, "loop-trace", scn);
    write_trace_csv(csv, samples);
    if (opt.common.out.empty()) {
      out << csv.str();
    } else {
      write_file(opt.common.out, csv.str());
      out << "wrote " << samples.size() << " ticks to " << opt.common.out << '\n';
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace rasim::cli
