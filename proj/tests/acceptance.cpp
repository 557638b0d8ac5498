// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rasim/commands.hpp"
#include "rasim/control.hpp"
#include "rasim/lidar.hpp"
#include "rasim/modem.hpp"
#include "rasim/rf.hpp"
#include "rasim/sim.hpp"

using namespace rasim;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kCalibratedGapDb = 7.0, kCalibratedGapTol = 0.5;
constexpr double kIdealGapTol = 0.1;
constexpr double kConstellationBudgetS = 5.0;
constexpr double kRaFlatnessDb = 0.5;
constexpr double kSymmetryDb = 0.3;
constexpr double kHalfPowerDb = 3.01, kHalfPowerTol = 0.1;
constexpr double kSweepBudgetS = 30.0;
constexpr double kLinkTol = 0.01;
constexpr double kAlignDeg = 1.0, kAlignWithinS = 1.0;
constexpr int kFuzzSequences = 10000;
constexpr double kAoaStdDeg = 0.158, kAoaStdRel = 0.25;
constexpr std::size_t kMinWindows = 200;
constexpr int kCodecCases = 10000;
constexpr double kBerSigmas = 3.0;
constexpr double kEvmSnrTolDb = 0.3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail, double runtime_s) {
  std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", n, detail.c_str(), runtime_s);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Oracles, written independently of the library.
double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double gray16_ber(double es_n0_db) {
  const double x = std::sqrt(std::pow(10.0, es_n0_db / 10.0) / 5.0);
  return (3 * q_func(x) + 2 * q_func(3 * x) - q_func(5 * x)) / 4.0;
}

double friis_db(double d_m, double f_hz) {
  const double pi = std::acos(-1.0);
  return 20.0 * std::log10(4.0 * pi * d_m * f_hz / 299792458.0);
}

// Roll-off of a cos^n pattern at `off`, with n chosen so that hpbw/2 is 3 dB down.
double cos_pattern_loss_db(double hpbw, double off) {
  const double n = std::log(0.5) / std::log(std::cos(hpbw / 2));
  return -10.0 * n * std::log10(std::cos(off));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_1() {
  const auto t0 = Clock::now();
  Scenario cal;
  cal.antenna.calibration_exponent = 2.33;
  const double az = deg_to_rad(60);
  const double cal_gap = constellation_experiment(cal, az, 4096, cal.seed).power_delta_db();
  const Scenario ideal;
  const double ideal_gap = constellation_experiment(ideal, az, 4096, ideal.seed).power_delta_db();
  const double oracle = cos_pattern_loss_db(deg_to_rad(60), az);
  const double rt = seconds_since(t0);
  const bool ok = std::abs(cal_gap - kCalibratedGapDb) <= kCalibratedGapTol &&
                  std::abs(ideal_gap - oracle) <= kIdealGapTol && rt < kConstellationBudgetS;
  report(1, ok,
         fmt("power delta at 60 deg: calibrated %.3f dB (want 7.0 +/- 0.5), idealized %.3f dB vs oracle %.3f",
             cal_gap, ideal_gap, oracle),
         rt);
}

void criterion_2() {
  const auto t0 = Clock::now();
  const Scenario scn;
  std::vector<double> angles;
  for (int d = -60; d <= 60; d += 10) angles.push_back(deg_to_rad(d));
  const SweepResult r = sweep_azimuth(scn, angles, kDefaultSettleS, scn.seed);
  const double rt = seconds_since(t0);

  const auto [lo, hi] = std::minmax_element(r.snr_ra_db.begin(), r.snr_ra_db.end());
  const double ra_span = *hi - *lo;
  const std::size_t centre = 6;
  bool max_at_zero = true;
  double asym = 0.0;
  for (std::size_t i = 0; i < r.snr_fixed_db.size(); ++i) {
    if (i != centre && r.snr_fixed_db[i] >= r.snr_fixed_db[centre]) max_at_zero = false;
    asym = std::max(asym, std::abs(r.snr_fixed_db[i] - r.snr_fixed_db[r.snr_fixed_db.size() - 1 - i]));
  }
  const double drop_m30 = r.snr_fixed_db[centre] - r.snr_fixed_db[3];
  const double drop_p30 = r.snr_fixed_db[centre] - r.snr_fixed_db[9];
  const bool ok = ra_span < kRaFlatnessDb && max_at_zero && asym <= kSymmetryDb &&
                  std::abs(drop_m30 - kHalfPowerDb) <= kHalfPowerTol &&
                  std::abs(drop_p30 - kHalfPowerDb) <= kHalfPowerTol && rt < kSweepBudgetS;
  report(2, ok,
         fmt("sweep: RA span %.3f dB, FIXED peak at 0 %s, asymmetry %.3f dB, -30/+30 drop %.3f/%.3f dB",
             ra_span, max_at_zero ? "yes" : "no", asym, drop_m30, drop_p30),
         rt);
}

void criterion_3() {
  const auto t0 = Clock::now();
  const Scenario scn;
  const PatternModel p = make_pattern(scn.antenna);
  const Pose rx{0.4, scn.link_distance_m};
  const LinkSample s = link_budget(scn, p, rx.azimuth_rad, rx, LinkMode::Ra);
  const double fspl = fspl_db(4.0, 5.8e9);
  const double fspl_oracle = friis_db(4.0, 5.8e9);
  const double rt = seconds_since(t0);
  const bool ok = std::abs(s.rx_power_dbm - (-37.61)) <= kLinkTol && std::abs(s.snr_db - 57.39) <= kLinkTol &&
                  std::abs(fspl - 59.76) <= kLinkTol && std::abs(fspl - fspl_oracle) <= 1e-9;
  report(3, ok,
         fmt("aligned rx power %.4f dBm, snr %.4f dB, FSPL %.4f dB (direct formula %.4f)", s.rx_power_dbm,
             s.snr_db, fspl, fspl_oracle),
         rt);
}

void criterion_4() {
  const auto t0 = Clock::now();
  const Scenario scn;
  const RotationLimits limits = scn.limits();

  // Closed loop against a receiver parked at 60 degrees.
  const double truth = deg_to_rad(60);
  const auto run = run_closed_loop(scn, static_target({truth, 4.0}), 6.0, scn.seed);
  const double first_estimate_s = run.estimates.front().window_end_s;
  double worst_deg = 0.0;
  for (const auto& t : run.ticks) {
    if (t.t_s >= first_estimate_s + kAlignWithinS - 1e-9)
      worst_deg = std::max(worst_deg, std::abs(rad_to_deg(t.servo.actual_rad - truth)));
  }

  // Fuzzed setpoint sequences through the controller.
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> sp(-kPi, kPi);
  std::uniform_int_distribution<int> len(1, 8);
  const double dt = 1.0 / scn.control_rate_hz;
  const double slew = scn.servo.slew_rate_rad_s * dt + 1e-12;
  long violations = 0;
  for (int seq = 0; seq < kFuzzSequences; ++seq) {
    std::vector<AoaEstimate> stream;
    const int n = len(rng);
    for (int k = 1; k <= n; ++k) stream.push_back({sp(rng), 10, 0.0, 0.5 * k});
    const auto r = track(scn.gains, scn.servo, limits, stream, scn.control_rate_hz, 0.5 * n + 1.0);
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      const double a = r.samples[i].state.actual_rad;
      if (a < limits.min_rad || a > limits.max_rad) ++violations;
      if (i > 0 && std::abs(a - r.samples[i - 1].state.actual_rad) > slew) ++violations;
    }
  }
  const double rt = seconds_since(t0);
  const bool ok = worst_deg < kAlignDeg && violations == 0;
  report(4, ok,
         fmt("worst error %.1f s after first estimate %.4f deg; %d fuzzed sequences, %ld range/slew violations",
             kAlignWithinS, worst_deg, kFuzzSequences, violations),
         rt);
}

void criterion_5() {
  const auto t0 = Clock::now();
  const Scenario scn;
  Rng rng(scn.seed);
  const Pose truth{deg_to_rad(60), 4.0};
  std::vector<TimedCluster> clusters;
  const int scans = 10 * 250;
  for (int k = 0; k < scans; ++k) {
    for (const auto& c : simulate_scan(scn.radar, truth, static_cast<std::uint16_t>(k), rng))
      clusters.push_back({k / scn.radar_scan_hz, c});
  }
  const auto est = aggregate_aoa(clusters, scn.aoa_window_s, scn.radar_scan_hz, ClusterGate::from(scn.radar));
  double sum = 0.0, sq = 0.0;
  for (const auto& e : est) sum += rad_to_deg(e.azimuth_rad);
  const double mean = sum / est.size();
  for (const auto& e : est) sq += std::pow(rad_to_deg(e.azimuth_rad) - mean, 2);
  const double sd = std::sqrt(sq / (est.size() - 1));

  const std::vector<double> seam = {deg_to_rad(179), deg_to_rad(-179)};
  const double wrapped = circular_mean(seam).mean_rad;
  const double rt = seconds_since(t0);
  const bool ok = est.size() >= kMinWindows && std::abs(sd - kAoaStdDeg) <= kAoaStdRel * kAoaStdDeg &&
                  wrapped == kPi;
  report(5, ok,
         fmt("%zu windows, estimate std %.4f deg (want %.3f +/- 25%%, 0.5/sqrt(10) = %.4f); seam mean %.17g rad",
             est.size(), sd, kAoaStdDeg, 0.5 / std::sqrt(10.0), wrapped),
         rt);
}

void criterion_6() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> cyc(0, 65535), az(0, 35999), rng_mm(0, 65535), inten(0, 255);
  long mismatches = 0, corruptions = 0, missed = 0;
  const std::string digits = "0123456789ABCDEF";
  for (int i = 0; i < kCodecCases; ++i) {
    const DetectionCluster c{static_cast<std::uint16_t>(cyc(rng)), static_cast<std::uint16_t>(az(rng)),
                             static_cast<std::uint16_t>(rng_mm(rng)), static_cast<std::uint8_t>(inten(rng))};
    const std::string line = encode_cluster(c);
    try {
      if (!(decode_cluster(line) == c)) ++mismatches;
    } catch (const DecodeError&) {
      ++mismatches;
    }
    if (i % 10 != 0) continue;
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
      for (char d : digits) {
        if (d == line[pos]) continue;
        std::string bad = line;
        bad[pos] = d;
        ++corruptions;
        try {
          decode_cluster(bad);
          ++missed;
        } catch (const DecodeError&) {
        }
      }
    }
  }

  // Worked frame built byte by byte: cycle 1, 60.00 deg, 4.000 m, intensity 255.
  const std::uint8_t body[] = {0x01, 0x00, 0x70, 0x17, 0xA0, 0x0F, 0xFF};
  std::uint8_t x = 0;
  for (auto b : body) x ^= b;
  std::string oracle = "AA55";
  for (auto b : body) oracle += fmt("%02X", b);
  oracle += fmt("%02X", x);
  const std::string worked = encode_cluster({1, 6000, 4000, 255});
  const double rt = seconds_since(t0);
  const bool ok = mismatches == 0 && missed == 0 && worked == oracle;
  report(6, ok,
         fmt("%d round-trips, %ld mismatches; %ld single-digit corruptions, %ld undetected; worked frame %s vs %s",
             kCodecCases, mismatches, corruptions, missed, worked.c_str(), oracle.c_str()),
         rt);
}

void criterion_7() {
  const auto t0 = Clock::now();
  long identity_errors = 0;
  std::vector<std::uint8_t> bits(20);
  for (std::uint32_t w = 0; w < (1u << 20); ++w) {
    for (int b = 0; b < 20; ++b) bits[b] = (w >> (19 - b)) & 1;
    if (demap_symbols(map_bits(bits)) != bits) ++identity_errors;
  }

  std::string ber_detail;
  bool ber_ok = true;
  const std::size_t n_symbols = 250000;  // 1e6 bits
  for (double snr : {10.0, 15.0}) {
    const double p = gray16_ber(snr);
    const double se = std::sqrt(p * (1 - p) / (4.0 * n_symbols));
    const double ber = run_modem(snr, n_symbols, 1000 + static_cast<std::uint64_t>(snr)).ber;
    const double z = (ber - p) / se;
    ber_ok = ber_ok && std::abs(z) <= kBerSigmas;
    ber_detail += fmt(" %.0f dB: %.3e vs %.3e (z=%+.2f);", snr, ber, p, z);
  }

  double worst_evm = 0.0;
  for (double snr : {15.0, 20.0, 25.0, 30.0, 40.0}) {
    const auto f = run_modem(snr, 100000, 77);
    worst_evm = std::max(worst_evm, std::abs(snr_from_evm(f.evm_rms) - snr));
  }
  const double rt = seconds_since(t0);
  const bool ok = identity_errors == 0 && ber_ok && worst_evm <= kEvmSnrTolDb;
  report(7, ok,
         fmt("all 2^20 20-bit streams, %ld identity errors; BER%s EVM->SNR worst %.3f dB", identity_errors,
             ber_detail.c_str(), worst_evm),
         rt);
}

void criterion_8() {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "rasim_acceptance";
  fs::remove_all(root);
  std::ostringstream sink;
  std::vector<std::string> differing;
  int bad_exit = 0;

  auto twice = [&](const std::string& name, const std::function<int(const fs::path&)>& run,
                   const std::vector<std::string>& files) {
    for (const char* tag : {"a", "b"}) {
      fs::create_directories(root / tag);
      if (run(root / tag) != cli::kOk) ++bad_exit;
    }
    for (const auto& f : files) {
      const std::string a = slurp(root / "a" / f);
      if (a.empty() || a != slurp(root / "b" / f)) differing.push_back(name + ":" + f);
    }
  };

  twice("sweep", [&](const fs::path& d) {
    cli::SweepOptions o;
    o.common.out = (d / "sweep.csv").string();
    return cli::cmd_sweep(o, sink, sink);
  }, {"sweep.csv"});
  twice("constellation", [&](const fs::path& d) {
    cli::ConstellationOptions o;
    o.common.out = (d / "cons").string();
    o.calibration_exponent = 2.33;
    return cli::cmd_constellation(o, sink, sink);
  }, {"cons/constellation_ra.csv", "cons/constellation_fixed.csv", "cons/summary.txt"});
  twice("lidar scan", [&](const fs::path& d) {
    cli::LidarScanOptions o;
    o.common.out = (d / "frames.hex").string();
    return cli::cmd_lidar_scan(o, sink, sink);
  }, {"frames.hex"});
  twice("radar-map", [&](const fs::path& d) {
    cli::RadarMapOptions o;
    o.cluster_file = (d / "frames.hex").string();
    o.out = (d / "map.pgm").string();
    return cli::cmd_radar_map(o, sink, sink);
  }, {"map.pgm"});
  twice("lidar decode", [&](const fs::path& d) {
    cli::LidarDecodeOptions o;
    o.cluster_file = (d / "frames.hex").string();
    o.out = (d / "frames.csv").string();
    return cli::cmd_lidar_decode(o, sink, sink);
  }, {"frames.csv"});
  twice("loop-trace", [&](const fs::path& d) {
    cli::LoopTraceOptions o;
    o.common.out = (d / "trace.csv").string();
    return cli::cmd_loop_trace(o, sink, sink);
  }, {"trace.csv"});

  std::string detail = fmt("6 commands run twice, %d nonzero exits, %zu differing outputs", bad_exit,
                           differing.size());
  for (const auto& d : differing) detail += " " + d;
  fs::remove_all(root);
  report(8, bad_exit == 0 && differing.empty(), detail, seconds_since(t0));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<void (*)()> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                            criterion_5, criterion_6, criterion_7, criterion_8};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what(), 0.0);
    }
  }
  std::printf("%d of 8 criteria failed, total %.2f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
