#ifndef RASIM_CONTROL_HPP
#define RASIM_CONTROL_HPP

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "rasim/angles.hpp"
#include "rasim/lidar.hpp"

namespace rasim {

struct RotationLimits {
  double min_rad = -kPi / 2.0;
  double max_rad = kPi / 2.0;
  double clamp(double theta) const;
  bool operator==(const RotationLimits&) const = default;
};

struct PidGains {
  double kp = 0.8;
  double ki = 0.01;
  double kd = 0.002;
  double integral_limit = 0.5;     // rad*s, anti-windup clamp
  double output_limit_rad = 0.1;   // max command change per update
  bool operator==(const PidGains&) const = default;
};

struct ServoModel {
  double slew_rate_rad_s = 6.98;  // 60 deg per 0.15 s
  double pwm_min_us = 500.0;
  double pwm_max_us = 2500.0;
  double pwm_quantum_us = 1.0;
  bool operator==(const ServoModel&) const = default;
};

struct ServoState {
  double commanded_rad = 0.0;
  double actual_rad = 0.0;
  double pulse_width_us = 1500.0;
  double integral = 0.0;
  double prev_error_rad = 0.0;
  bool operator==(const ServoState&) const = default;
};

// Linear map of the clamped angle onto [pwm_min, pwm_max], rounded to the quantum.
double pwm_from_angle(double theta, const ServoModel& model, const RotationLimits& limits);

// Throws std::out_of_range for a pulse outside [pwm_min, pwm_max].
double angle_from_pwm(double pulse_us, const ServoModel& model, const RotationLimits& limits);

ServoState initial_servo_state(const ServoModel& model, const RotationLimits& limits,
                               double angle_rad = 0.0);

struct PidOutput {
  double delta_rad = 0.0;
  ServoState state;
};

// Positional PID on the alignment error. The integral is clamped to
// +-integral_limit and the output to +-output_limit_rad.
// Throws std::invalid_argument when dt_s <= 0.
PidOutput pid_step(const PidGains& gains, const ServoState& state, double error_rad, double dt_s);

// Slew-limited motion of the actual angle toward the commanded one.
ServoState servo_step(const ServoModel& model, const RotationLimits& limits, const ServoState& state,
                      double dt_s);

// One servo owned by one control loop: PID -> command clamp -> servo motion.
class ServoController {
 public:
  ServoController(PidGains gains, ServoModel model, RotationLimits limits, double initial_rad = 0.0);

  // Without a setpoint the servo only keeps moving toward its last command.
  // Returns the wrapped alignment error used, if any.
  std::optional<double> tick(std::optional<double> setpoint_rad, double dt_s);

  const ServoState& state() const { return state_; }

 private:
  PidGains gains_;
  ServoModel model_;
  RotationLimits limits_;
  ServoState state_;
};

struct TrackSample {
  double t_s = 0.0;
  std::optional<double> setpoint_rad;
  std::optional<double> error_rad;
  ServoState state;
};

struct TrackResult {
  std::vector<TrackSample> samples;
  bool no_setpoint = false;  // the stream never produced a setpoint
};

// Runs the control loop at control_rate_hz for duration_s. At each tick the
// most recent estimate whose window has closed is the setpoint.
// Throws std::invalid_argument on a stream that is not time-ordered.
TrackResult track(const PidGains& gains, const ServoModel& model, const RotationLimits& limits,
                  std::span<const AoaEstimate> aoa_stream, double control_rate_hz, double duration_s,
                  double initial_rad = 0.0);

// t_s,setpoint_rad,commanded_rad,actual_rad,pulse_us,error_rad
void write_trace_csv(std::ostream& os, std::span<const TrackSample> samples);

}  // namespace rasim

#endif  // RASIM_CONTROL_HPP
