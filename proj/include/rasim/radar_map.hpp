#ifndef RASIM_RADAR_MAP_HPP
#define RASIM_RADAR_MAP_HPP

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "rasim/lidar.hpp"

namespace rasim {

// Polar occupancy histogram. Bins are centered: azimuth bin i is centered on
// i * 360 / azimuth_bins degrees, range bin j on j * max_range_m / range_bins.
class RadarMap {
 public:
  RadarMap(std::size_t azimuth_bins, std::size_t range_bins, double max_range_m);

  // Returns false when the detection falls beyond the last range bin.
  bool add(const DetectionCluster& c);

  std::size_t azimuth_bins() const { return azimuth_bins_; }
  std::size_t range_bins() const { return range_bins_; }
  double max_range_m() const { return max_range_m_; }
  std::uint32_t at(std::size_t azimuth_bin, std::size_t range_bin) const;
  std::uint64_t total() const { return total_; }

  double azimuth_center_deg(std::size_t bin) const;
  double range_center_m(std::size_t bin) const;

  struct Cell {
    std::size_t azimuth_bin = 0;
    std::size_t range_bin = 0;
    std::uint32_t count = 0;
  };
  // First maximal cell in row-major (range, azimuth) order.
  Cell modal_cell() const;

  // Binary P5 graymap: width = azimuth bins, height = range bins with the
  // nearest range on the top row; brightness scales linearly to the max count.
  void write_pgm(std::ostream& os) const;

 private:
  std::size_t azimuth_bins_;
  std::size_t range_bins_;
  double max_range_m_;
  std::uint64_t total_ = 0;
  std::vector<std::uint32_t> grid_;  // [range_bin * azimuth_bins + azimuth_bin]
};

struct DecodeStats {
  std::size_t accepted = 0;
  std::array<std::size_t, 5> rejected{};  // indexed by DecodeErrorKind

  std::size_t rejected_total() const;
  std::size_t rejected_of(DecodeErrorKind kind) const {
    return rejected[static_cast<std::size_t>(kind)];
  }
};

struct DecodedFile {
  std::vector<DetectionCluster> clusters;
  DecodeStats stats;
};

// Newline-delimited hex frames; blank lines are skipped, bad frames counted.
DecodedFile decode_cluster_stream(std::istream& is);

}  // namespace rasim

#endif  // RASIM_RADAR_MAP_HPP
