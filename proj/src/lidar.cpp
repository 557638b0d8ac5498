#include "rasim/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rasim {

namespace {

constexpr double kTimeEps = 1e-9;

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  return -1;
}

void put_u16(Frame& f, std::size_t at, std::uint16_t v) {
  f[at] = static_cast<std::uint8_t>(v & 0xFF);
  f[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16(const Frame& f, std::size_t at) {
  return static_cast<std::uint16_t>(f[at] | (f[at + 1] << 8));
}

}  // namespace

const char* to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::BadLength: return "bad_length";
    case DecodeErrorKind::InvalidHex: return "invalid_hex";
    case DecodeErrorKind::BadSync: return "bad_sync";
    case DecodeErrorKind::ChecksumMismatch: return "checksum_mismatch";
    case DecodeErrorKind::AzimuthOutOfRange: return "azimuth_out_of_range";
  }
  return "unknown";
}

double cluster_azimuth_rad(const DetectionCluster& c) {
  return wrap_angle(deg_to_rad(c.azimuth_cdeg / 100.0));
}

double cluster_range_m(const DetectionCluster& c) { return c.range_mm / 1000.0; }

std::vector<DetectionCluster> simulate_scan(const RadarModel& model, const Pose& truth,
                                            std::uint16_t cycle_index, Rng& rng) {
  if (truth.range_m > model.range_gate_m) return {};

  double azimuth =
      std::round(truth.azimuth_rad / model.angular_resolution_rad) * model.angular_resolution_rad;
  if (model.aoa_noise_std_rad > 0.0) {
    azimuth += std::normal_distribution<double>(0.0, model.aoa_noise_std_rad)(rng);
  }
  double range = truth.range_m;
  if (model.range_noise_std_m > 0.0) {
    range += std::normal_distribution<double>(0.0, model.range_noise_std_m)(rng);
  }

  DetectionCluster c;
  c.cycle_index = cycle_index;
  long cdeg = std::lround(rad_to_deg(wrap_angle_positive(azimuth)) * 100.0);
  c.azimuth_cdeg = static_cast<std::uint16_t>(cdeg % 36000);
  c.range_mm = static_cast<std::uint16_t>(std::clamp(std::lround(range * 1000.0), 0L, 65535L));
  double strength = truth.range_m > 0.0 ? std::min(1.0, 1.0 / (truth.range_m * truth.range_m)) : 1.0;
  c.intensity = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * strength), 0L, 255L));
  return {c};
}

std::uint8_t frame_checksum(std::span<const std::uint8_t> frame) {
  std::uint8_t x = 0;
  for (std::size_t i = 2; i < kFrameBytes - 1 && i < frame.size(); ++i) x ^= frame[i];
  return x;
}

Frame frame_bytes(const DetectionCluster& c) {
  if (c.azimuth_cdeg > kMaxAzimuthCdeg) {
    throw std::invalid_argument("encode_cluster: azimuth_cdeg " + std::to_string(c.azimuth_cdeg) +
                                " exceeds 35999");
  }
  Frame f{};
  f[0] = kSync0;
  f[1] = kSync1;
  put_u16(f, 2, c.cycle_index);
  put_u16(f, 4, c.azimuth_cdeg);
  put_u16(f, 6, c.range_mm);
  f[8] = c.intensity;
  f[9] = frame_checksum(f);
  return f;
}

std::string encode_cluster(const DetectionCluster& c) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  const Frame f = frame_bytes(c);
  std::string out;
  out.reserve(kFrameHexChars);
  for (std::uint8_t b : f) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

DetectionCluster decode_frame(const Frame& f) {
  if (f[0] != kSync0 || f[1] != kSync1) {
    throw DecodeError(DecodeErrorKind::BadSync, "decode_cluster: bad sync bytes");
  }
  if (frame_checksum(f) != f[9]) {
    throw DecodeError(DecodeErrorKind::ChecksumMismatch, "decode_cluster: checksum mismatch");
  }
  DetectionCluster c;
  c.cycle_index = get_u16(f, 2);
  c.azimuth_cdeg = get_u16(f, 4);
  c.range_mm = get_u16(f, 6);
  c.intensity = f[8];
  if (c.azimuth_cdeg > kMaxAzimuthCdeg) {
    throw DecodeError(DecodeErrorKind::AzimuthOutOfRange,
                      "decode_cluster: azimuth field " + std::to_string(c.azimuth_cdeg) +
                          " out of range");
  }
  return c;
}

DetectionCluster decode_cluster(std::string_view line) {
  if (line.size() != kFrameHexChars) {
    throw DecodeError(DecodeErrorKind::BadLength,
                      "decode_cluster: expected 20 hex characters, got " +
                          std::to_string(line.size()));
  }
  Frame f{};
  for (std::size_t i = 0; i < kFrameBytes; ++i) {
    int hi = hex_value(line[2 * i]);
    int lo = hex_value(line[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw DecodeError(DecodeErrorKind::InvalidHex, "decode_cluster: non-hex character");
    }
    f[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return decode_frame(f);
}

CircularMean circular_mean(std::span<const double> angles) {
  if (angles.empty()) throw std::invalid_argument("circular_mean: empty sequence");
  double s = 0.0;
  double c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  const double n = static_cast<double>(angles.size());
  const double resultant = std::hypot(s, c) / n;
  return {wrap_angle(std::atan2(s, c)), std::clamp(1.0 - resultant, 0.0, 1.0)};
}

bool ClusterGate::accepts(const DetectionCluster& c) const {
  return c.intensity >= intensity_threshold && cluster_range_m(c) <= range_gate_m;
}

AoaAggregator::AoaAggregator(double window_s, double scan_hz, ClusterGate gate)
    : window_s_(window_s), gate_(gate) {
  if (!(window_s > 0.0) || !(scan_hz > 0.0)) {
    throw std::invalid_argument("aggregate_aoa: window and scan rate must be positive");
  }
  if (window_s * scan_hz < 1.0 - kTimeEps) {
    throw std::invalid_argument("aggregate_aoa: window shorter than one scan period");
  }
}

long AoaAggregator::window_index(double t_s) const {
  return static_cast<long>(std::floor(t_s / window_s_ + kTimeEps));
}

void AoaAggregator::push(double t_s, const DetectionCluster& c) {
  if (last_t_ && t_s < *last_t_) {
    throw std::invalid_argument("aggregate_aoa: cluster stream is not time-ordered");
  }
  last_t_ = t_s;
  const long idx = window_index(t_s);
  if (open_index_ && *open_index_ != idx) close_open_window();
  open_index_ = idx;
  if (gate_.accepts(c)) angles_.push_back(cluster_azimuth_rad(c));
}

std::vector<AoaEstimate> AoaAggregator::advance_to(double t_s) {
  if (open_index_ && static_cast<double>(*open_index_ + 1) * window_s_ <= t_s + kTimeEps) {
    close_open_window();
  }
  return std::exchange(ready_, {});
}

std::vector<AoaEstimate> AoaAggregator::flush() {
  close_open_window();
  return std::exchange(ready_, {});
}

void AoaAggregator::close_open_window() {
  if (open_index_ && !angles_.empty()) {
    const CircularMean m = circular_mean(angles_);
    ready_.push_back({m.mean_rad, angles_.size(), m.dispersion,
                      static_cast<double>(*open_index_ + 1) * window_s_});
  }
  angles_.clear();
  open_index_.reset();
}

std::vector<AoaEstimate> aggregate_aoa(std::span<const TimedCluster> clusters, double window_s,
                                       double scan_hz, ClusterGate gate) {
  AoaAggregator agg(window_s, scan_hz, gate);
  for (const auto& tc : clusters) agg.push(tc.t_s, tc.cluster);
  return agg.flush();
}

}  // namespace rasim
