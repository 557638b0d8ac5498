#include "rasim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rasim {

namespace {

long ticks_for_period(double period_s, double dt_s, const char* what) {
  const double ratio = period_s / dt_s;
  const long ticks = std::lround(ratio);
  if (ticks < 1 || std::abs(ratio - static_cast<double>(ticks)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(std::string("sim: ") + what +
                                " period is not an integer multiple of the control tick");
  }
  return ticks;
}

}  // namespace

Trajectory static_target(Pose pose) {
  return [pose](double) { return pose; };
}

Trajectory arc_target(double start_rad, double stop_rad, double rate_rad_s, double range_m) {
  return [=](double t) {
    const double span = stop_rad - start_rad;
    const double travelled = std::min(std::abs(span), std::abs(rate_rad_s) * t);
    return Pose{wrap_angle(start_rad + std::copysign(travelled, span)), range_m};
  };
}

SimClock make_clock(const Scenario& scn, double duration_s) {
  validate(scn);
  SimClock clock;
  clock.dt_s = 1.0 / scn.control_rate_hz;
  clock.duration_s = duration_s;
  clock.ticks_per_scan = ticks_for_period(1.0 / scn.radar_scan_hz, clock.dt_s, "radar scan");
  clock.ticks_per_window = ticks_for_period(scn.aoa_window_s, clock.dt_s, "AoA window");
  if (!(duration_s >= scn.aoa_window_s - 1e-9)) {
    throw std::invalid_argument("sim: duration shorter than one AoA window");
  }
  clock.total_ticks = std::lround(duration_s / clock.dt_s);
  return clock;
}

ClosedLoopRun run_closed_loop(const Scenario& scn, const Trajectory& rx_trajectory,
                              double duration_s, std::uint64_t seed) {
  const SimClock clock = make_clock(scn, duration_s);
  const PatternModel pattern = make_pattern(scn.antenna);
  Rng rng(seed);
  AoaAggregator aggregator(scn.aoa_window_s, scn.radar_scan_hz, ClusterGate::from(scn.radar));
  ServoController servo(scn.gains, scn.servo, scn.limits());

  ClosedLoopRun run;
  run.ticks.reserve(static_cast<std::size_t>(clock.total_ticks + 1));
  std::optional<double> setpoint;
  std::uint16_t cycle = 0;

  for (long k = 0; k <= clock.total_ticks; ++k) {
    const double t = clock.time_at(k);
    const Pose rx = rx_trajectory(t);

    if (k % clock.ticks_per_scan == 0) {
      for (const auto& c : simulate_scan(scn.radar, rx, cycle, rng)) {
        aggregator.push(t, c);
        run.detections.push_back({t, c});
      }
      ++cycle;
    }
    if (k > 0 && k % clock.ticks_per_window == 0) {
      for (const auto& est : aggregator.advance_to(t)) {
        setpoint = est.azimuth_rad;
        run.estimates.push_back(est);
      }
    }

    LoopTick tick;
    tick.t_s = t;
    tick.setpoint_rad = setpoint;
    if (k > 0) tick.error_rad = servo.tick(setpoint, clock.dt_s);
    tick.servo = servo.state();
    tick.ra = link_budget(scn, pattern, tick.servo.actual_rad, rx, LinkMode::Ra, t);
    tick.fixed = link_budget(scn, pattern, 0.0, rx, LinkMode::Fixed, t);
    run.ticks.push_back(tick);
  }
  return run;
}

SteadyState steady_state(const ClosedLoopRun& run, double span_s) {
  if (run.ticks.empty()) throw std::invalid_argument("steady_state: empty run");
  const double t_end = run.ticks.back().t_s;
  SteadyState out;
  std::size_t n = 0;
  for (const auto& tick : run.ticks) {
    if (tick.t_s <= t_end - span_s + 1e-9) continue;
    out.snr_ra_db += tick.ra.snr_db;
    out.snr_fixed_db += tick.fixed.snr_db;
    out.rx_power_ra_dbm += tick.ra.rx_power_dbm;
    out.rx_power_fixed_dbm += tick.fixed.rx_power_dbm;
    ++n;
  }
  if (n == 0) {
    const auto& last = run.ticks.back();
    return {last.ra.snr_db, last.fixed.snr_db, last.ra.rx_power_dbm, last.fixed.rx_power_dbm};
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.snr_ra_db *= inv;
  out.snr_fixed_db *= inv;
  out.rx_power_ra_dbm *= inv;
  out.rx_power_fixed_dbm *= inv;
  return out;
}

SweepResult sweep_azimuth(const Scenario& scn, std::span<const double> angles_rad,
                          double settle_s, std::uint64_t seed) {
  for (double a : angles_rad) {
    if (!(a >= scn.rotation_min_rad && a <= scn.rotation_max_rad)) {
      throw std::invalid_argument("sweep_azimuth: angle " + std::to_string(a) +
                                  " rad outside the rotation range");
    }
  }
  make_clock(scn, settle_s);

  std::vector<std::future<SteadyState>> jobs;
  jobs.reserve(angles_rad.size());
  for (std::size_t i = 0; i < angles_rad.size(); ++i) {
    const Pose rx{angles_rad[i], scn.link_distance_m};
    jobs.push_back(std::async(std::launch::async, [&scn, rx, settle_s, s = seed + i] {
      return steady_state(run_closed_loop(scn, static_target(rx), settle_s, s), scn.aoa_window_s);
    }));
  }

  SweepResult result;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const SteadyState ss = jobs[i].get();
    result.azimuth_rad.push_back(angles_rad[i]);
    result.snr_ra_db.push_back(ss.snr_ra_db);
    result.snr_fixed_db.push_back(ss.snr_fixed_db);
  }
  return result;
}

ConstellationExperiment constellation_experiment(const Scenario& scn, double rx_azimuth_rad,
                                                 std::size_t n_symbols, std::uint64_t seed) {
  if (n_symbols < kMinConstellationSymbols) {
    throw std::invalid_argument("constellation_experiment: need at least 1000 symbols, got " +
                                std::to_string(n_symbols));
  }
  const Pose rx{wrap_angle(rx_azimuth_rad), scn.link_distance_m};
  const ClosedLoopRun run = run_closed_loop(scn, static_target(rx), kDefaultSettleS, seed);
  const SteadyState ss = steady_state(run, scn.aoa_window_s);

  ConstellationExperiment exp;
  exp.rx_power_ra_dbm = ss.rx_power_ra_dbm;
  exp.rx_power_fixed_dbm = ss.rx_power_fixed_dbm;
  exp.ra = run_modem(ss.snr_ra_db, n_symbols, seed + 1);
  exp.fixed = run_modem(ss.snr_fixed_db, n_symbols, seed + 2);
  return exp;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "azimuth_deg,snr_ra_db,snr_fixed_db\n";
  char buf[128];
  for (std::size_t i = 0; i < r.azimuth_rad.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", rad_to_deg(r.azimuth_rad[i]), r.snr_ra_db[i],
                  r.snr_fixed_db[i]);
    os << buf;
  }
}

SweepResult read_sweep_csv(std::istream& is) {
  SweepResult r;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line.rfind("azimuth_deg,", 0) != 0) {
        throw std::runtime_error("read_sweep_csv: missing header row");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string az, ra, fx;
    if (!std::getline(row, az, ',') || !std::getline(row, ra, ',') || !std::getline(row, fx)) {
      throw std::runtime_error("read_sweep_csv: malformed row '" + line + "'");
    }
    r.azimuth_rad.push_back(deg_to_rad(std::stod(az)));
    r.snr_ra_db.push_back(std::stod(ra));
    r.snr_fixed_db.push_back(std::stod(fx));
  }
  return r;
}

}  // namespace rasim
