#ifndef RASIM_LIDAR_HPP
#define RASIM_LIDAR_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rasim/angles.hpp"

namespace rasim {

using Rng = std::mt19937_64;

struct Pose {
  double azimuth_rad = 0.0;  // (-pi, pi], 0 = fixed antenna boresight, CCW positive
  double range_m = 0.0;
  bool operator==(const Pose&) const = default;
};

struct RadarModel {
  double angular_resolution_rad = kTwoPi / 360.0;
  double aoa_noise_std_rad = deg_to_rad(0.5);
  double range_noise_std_m = 0.01;
  double range_gate_m = 12.0;
  int intensity_threshold = 16;
  bool operator==(const RadarModel&) const = default;
};

// One detection as it appears on the wire.
struct DetectionCluster {
  std::uint16_t cycle_index = 0;
  std::uint16_t azimuth_cdeg = 0;  // [0, 35999]
  std::uint16_t range_mm = 0;
  std::uint8_t intensity = 0;
  bool operator==(const DetectionCluster&) const = default;
};

inline constexpr std::size_t kFrameBytes = 10;
inline constexpr std::size_t kFrameHexChars = 2 * kFrameBytes;
inline constexpr std::uint8_t kSync0 = 0xAA;
inline constexpr std::uint8_t kSync1 = 0x55;
inline constexpr std::uint16_t kMaxAzimuthCdeg = 35999;

using Frame = std::array<std::uint8_t, kFrameBytes>;

enum class DecodeErrorKind { BadLength, InvalidHex, BadSync, ChecksumMismatch, AzimuthOutOfRange };

const char* to_string(DecodeErrorKind kind);

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  DecodeErrorKind kind() const { return kind_; }

 private:
  DecodeErrorKind kind_;
};

double cluster_azimuth_rad(const DetectionCluster& c);
double cluster_range_m(const DetectionCluster& c);

/// Simulates one TOF scan cycle against the single target in the scene.
///
/// The true azimuth is snapped to the beam grid, then perturbed by Gaussian
/// AoA noise; range gets Gaussian range noise. Intensity falls off as 1/r^2
/// of the true range. A target beyond the range gate yields no detection.
std::vector<DetectionCluster> simulate_scan(const RadarModel& model, const Pose& truth,
                                            std::uint16_t cycle_index, Rng& rng);

Frame frame_bytes(const DetectionCluster& c);
std::uint8_t frame_checksum(std::span<const std::uint8_t> frame);

// 20 uppercase hex characters. Throws std::invalid_argument on an azimuth
// above 35999 cdeg.
std::string encode_cluster(const DetectionCluster& c);

// Throws DecodeError with the matching kind.
DetectionCluster decode_cluster(std::string_view line);
DetectionCluster decode_frame(const Frame& frame);

struct CircularMean {
  double mean_rad = 0.0;
  double dispersion = 0.0;  // 1 - mean resultant length
};

// Throws std::invalid_argument on an empty sequence.
CircularMean circular_mean(std::span<const double> angles);

struct AoaEstimate {
  double azimuth_rad = 0.0;
  std::size_t sample_count = 0;
  double circular_dispersion = 0.0;
  double window_end_s = 0.0;
};

struct TimedCluster {
  double t_s = 0.0;
  DetectionCluster cluster;
};

struct ClusterGate {
  int intensity_threshold = 16;
  double range_gate_m = 12.0;

  static ClusterGate from(const RadarModel& model) {
    return {model.intensity_threshold, model.range_gate_m};
  }
  bool accepts(const DetectionCluster& c) const;
};

// Tumbling-window circular averaging of a time-ordered cluster stream.
// Windows are aligned to t = 0; a window with no accepted cluster emits
// nothing.
class AoaAggregator {
 public:
  AoaAggregator(double window_s, double scan_hz, ClusterGate gate);

  // Throws std::invalid_argument when t_s precedes the previous push.
  void push(double t_s, const DetectionCluster& c);

  // Closes every window that ends at or before t_s and returns what they produced.
  std::vector<AoaEstimate> advance_to(double t_s);

  std::vector<AoaEstimate> flush();

 private:
  long window_index(double t_s) const;
  void close_open_window();

  double window_s_;
  ClusterGate gate_;
  std::optional<long> open_index_;
  std::optional<double> last_t_;
  std::vector<double> angles_;
  std::vector<AoaEstimate> ready_;
};

std::vector<AoaEstimate> aggregate_aoa(std::span<const TimedCluster> clusters, double window_s,
                                       double scan_hz, ClusterGate gate = {});

}  // namespace rasim

#endif  // RASIM_LIDAR_HPP
