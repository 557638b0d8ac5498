#ifndef RASIM_SIM_HPP
#define RASIM_SIM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "rasim/control.hpp"
#include "rasim/lidar.hpp"
#include "rasim/modem.hpp"
#include "rasim/rf.hpp"
#include "rasim/scenario.hpp"

namespace rasim {

// Receiver position as a function of simulation time.
using Trajectory = std::function<Pose(double t_s)>;

Trajectory static_target(Pose pose);

// Constant angular rate from start to stop, holding stop afterwards.
Trajectory arc_target(double start_rad, double stop_rad, double rate_rad_s, double range_m);

// Shared tick grid. Every event (scan, window close, control step) lands on
// an integer tick.
struct SimClock {
  double dt_s = 0.02;
  double duration_s = 0.0;
  long total_ticks = 0;
  long ticks_per_scan = 5;
  long ticks_per_window = 50;

  double time_at(long tick) const { return static_cast<double>(tick) * dt_s; }
};

// Throws std::invalid_argument when the radar or window period is not an
// integer number of control ticks, or the run is shorter than one window.
SimClock make_clock(const Scenario& scn, double duration_s);

struct LoopTick {
  double t_s = 0.0;
  std::optional<double> setpoint_rad;
  std::optional<double> error_rad;
  ServoState servo;
  LinkSample ra;
  LinkSample fixed;
};

struct ClosedLoopRun {
  std::vector<LoopTick> ticks;
  std::vector<AoaEstimate> estimates;
  std::vector<TimedCluster> detections;
};

/// Runs the whole chain on one clock. Per tick, in order: trajectory, radar
/// scan (every ticks_per_scan), AoA window close (every ticks_per_window),
/// PID, servo, then the RA (boresight = actual angle) and FIXED (boresight 0)
/// link samples. Identical (scenario, trajectory, seed) give identical output.
ClosedLoopRun run_closed_loop(const Scenario& scn, const Trajectory& rx_trajectory,
                              double duration_s, std::uint64_t seed);

struct SteadyState {
  double snr_ra_db = 0.0;
  double snr_fixed_db = 0.0;
  double rx_power_ra_dbm = 0.0;
  double rx_power_fixed_dbm = 0.0;
};

// Means over ticks in the final averaging span (one AoA window) of a run.
SteadyState steady_state(const ClosedLoopRun& run, double span_s);

struct SweepResult {
  std::vector<double> azimuth_rad;
  std::vector<double> snr_ra_db;
  std::vector<double> snr_fixed_db;
};

inline constexpr double kDefaultSettleS = 3.0;

// One fresh closed loop per angle (seed + index), run in parallel, merged in
// input order. Throws std::invalid_argument for angles outside the rotation range.
SweepResult sweep_azimuth(const Scenario& scn, std::span<const double> angles_rad,
                          double settle_s, std::uint64_t seed);

struct ConstellationExperiment {
  ConstellationFrame ra;
  ConstellationFrame fixed;
  double rx_power_ra_dbm = 0.0;
  double rx_power_fixed_dbm = 0.0;
  double power_delta_db() const { return rx_power_ra_dbm - rx_power_fixed_dbm; }
};

inline constexpr std::size_t kMinConstellationSymbols = 1000;

// Settles a closed loop at the given azimuth, then runs the modem at each
// mode's steady-state SNR (RA frame seed + 1, FIXED frame seed + 2).
// Throws std::invalid_argument when n_symbols < 1000.
ConstellationExperiment constellation_experiment(const Scenario& scn, double rx_azimuth_rad,
                                                 std::size_t n_symbols, std::uint64_t seed);

// azimuth_deg,snr_ra_db,snr_fixed_db
void write_sweep_csv(std::ostream& os, const SweepResult& result);

// Reads what write_sweep_csv wrote; `#` lines and the header are skipped.
SweepResult read_sweep_csv(std::istream& is);

}  // namespace rasim

#endif  // RASIM_SIM_HPP
