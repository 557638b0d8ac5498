#include "rasim/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rasim {

double RotationLimits::clamp(double theta) const { return std::clamp(theta, min_rad, max_rad); }

double pwm_from_angle(double theta, const ServoModel& model, const RotationLimits& limits) {
  const double span = limits.max_rad - limits.min_rad;
  const double frac = (limits.clamp(theta) - limits.min_rad) / span;
  const double raw = frac * (model.pwm_max_us - model.pwm_min_us);
  const double quantized = std::round(raw / model.pwm_quantum_us) * model.pwm_quantum_us;
  return std::clamp(model.pwm_min_us + quantized, model.pwm_min_us, model.pwm_max_us);
}

double angle_from_pwm(double pulse_us, const ServoModel& model, const RotationLimits& limits) {
  if (!(pulse_us >= model.pwm_min_us && pulse_us <= model.pwm_max_us)) {
    throw std::out_of_range("angle_from_pwm: pulse " + std::to_string(pulse_us) +
                            " us outside PWM range");
  }
  const double frac = (pulse_us - model.pwm_min_us) / (model.pwm_max_us - model.pwm_min_us);
  return limits.min_rad + frac * (limits.max_rad - limits.min_rad);
}

ServoState initial_servo_state(const ServoModel& model, const RotationLimits& limits,
                               double angle_rad) {
  ServoState s;
  s.commanded_rad = s.actual_rad = limits.clamp(angle_rad);
  s.pulse_width_us = pwm_from_angle(s.commanded_rad, model, limits);
  return s;
}

PidOutput pid_step(const PidGains& gains, const ServoState& state, double error_rad, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("pid_step: dt must be positive");
  ServoState next = state;
  next.integral =
      std::clamp(state.integral + error_rad * dt_s, -gains.integral_limit, gains.integral_limit);
  const double derivative = (error_rad - state.prev_error_rad) / dt_s;
  next.prev_error_rad = error_rad;
  const double out = gains.kp * error_rad + gains.ki * next.integral + gains.kd * derivative;
  return {std::clamp(out, -gains.output_limit_rad, gains.output_limit_rad), next};
}

ServoState servo_step(const ServoModel& model, const RotationLimits& limits, const ServoState& state,
                      double dt_s) {
  ServoState next = state;
  next.commanded_rad = limits.clamp(state.commanded_rad);
  const double gap = next.commanded_rad - state.actual_rad;
  const double max_step = model.slew_rate_rad_s * dt_s;
  next.actual_rad = std::abs(gap) <= max_step ? next.commanded_rad
                                              : state.actual_rad + std::copysign(max_step, gap);
  next.actual_rad = limits.clamp(next.actual_rad);
  next.pulse_width_us = pwm_from_angle(next.commanded_rad, model, limits);
  return next;
}

ServoController::ServoController(PidGains gains, ServoModel model, RotationLimits limits,
                                 double initial_rad)
    : gains_(gains),
      model_(model),
      limits_(limits),
      state_(initial_servo_state(model, limits, initial_rad)) {}

std::optional<double> ServoController::tick(std::optional<double> setpoint_rad, double dt_s) {
  std::optional<double> error;
  if (setpoint_rad) {
    error = wrap_angle(*setpoint_rad - state_.actual_rad);
    PidOutput pid = pid_step(gains_, state_, *error, dt_s);
    state_ = pid.state;
    state_.commanded_rad = limits_.clamp(state_.commanded_rad + pid.delta_rad);
  }
  state_ = servo_step(model_, limits_, state_, dt_s);
  return error;
}

TrackResult track(const PidGains& gains, const ServoModel& model, const RotationLimits& limits,
                  std::span<const AoaEstimate> aoa_stream, double control_rate_hz, double duration_s,
                  double initial_rad) {
  if (!(control_rate_hz > 0.0)) throw std::invalid_argument("track: control rate must be positive");
  for (std::size_t i = 1; i < aoa_stream.size(); ++i) {
    if (aoa_stream[i].window_end_s < aoa_stream[i - 1].window_end_s) {
      throw std::invalid_argument("track: AoA stream is not time-ordered");
    }
  }
  const double dt = 1.0 / control_rate_hz;
  const long ticks = std::lround(duration_s * control_rate_hz);

  TrackResult result;
  result.no_setpoint = aoa_stream.empty();
  result.samples.reserve(static_cast<std::size_t>(std::max(0L, ticks + 1)));

  ServoController servo(gains, model, limits, initial_rad);
  std::size_t next_estimate = 0;
  std::optional<double> setpoint;
  for (long k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    while (next_estimate < aoa_stream.size() && aoa_stream[next_estimate].window_end_s <= t + 1e-9) {
      setpoint = aoa_stream[next_estimate++].azimuth_rad;
    }
    // Tick 0 records the initial state.
    std::optional<double> error = k == 0 ? std::nullopt : servo.tick(setpoint, dt);
    result.samples.push_back({t, setpoint, error, servo.state()});
  }
  return result;
}

void write_trace_csv(std::ostream& os, std::span<const TrackSample> samples) {
  os << "t_s,setpoint_rad,commanded_rad,actual_rad,pulse_us,error_rad\n";
  char buf[256];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.6f,", s.t_s);
    os << buf;
    if (s.setpoint_rad) {
      std::snprintf(buf, sizeof buf, "%.9f", *s.setpoint_rad);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.9f,%.9f,%.0f,", s.state.commanded_rad, s.state.actual_rad,
                  s.state.pulse_width_us);
    os << buf;
    if (s.error_rad) {
      std::snprintf(buf, sizeof buf, "%.9f", *s.error_rad);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace rasim
