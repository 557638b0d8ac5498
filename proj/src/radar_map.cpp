#include "rasim/radar_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rasim {

RadarMap::RadarMap(std::size_t azimuth_bins, std::size_t range_bins, double max_range_m)
    : azimuth_bins_(azimuth_bins), range_bins_(range_bins), max_range_m_(max_range_m) {
  if (azimuth_bins == 0 || range_bins == 0 || !(max_range_m > 0.0)) {
    throw std::invalid_argument("RadarMap: bin counts and max range must be positive");
  }
  grid_.assign(azimuth_bins * range_bins, 0);
}

bool RadarMap::add(const DetectionCluster& c) {
  const double az_width = 36000.0 / static_cast<double>(azimuth_bins_);
  const auto az_bin =
      static_cast<std::size_t>(std::lround(c.azimuth_cdeg / az_width)) % azimuth_bins_;
  const double r_width = max_range_m_ / static_cast<double>(range_bins_);
  const auto r_bin = static_cast<std::size_t>(std::lround(cluster_range_m(c) / r_width));
  if (r_bin >= range_bins_) return false;
  ++grid_[r_bin * azimuth_bins_ + az_bin];
  ++total_;
  return true;
}

std::uint32_t RadarMap::at(std::size_t azimuth_bin, std::size_t range_bin) const {
  return grid_.at(range_bin * azimuth_bins_ + azimuth_bin);
}

double RadarMap::azimuth_center_deg(std::size_t bin) const {
  return static_cast<double>(bin) * 360.0 / static_cast<double>(azimuth_bins_);
}

double RadarMap::range_center_m(std::size_t bin) const {
  return static_cast<double>(bin) * max_range_m_ / static_cast<double>(range_bins_);
}

RadarMap::Cell RadarMap::modal_cell() const {
  const auto it = std::max_element(grid_.begin(), grid_.end());
  const auto idx = static_cast<std::size_t>(it - grid_.begin());
  return {idx % azimuth_bins_, idx / azimuth_bins_, *it};
}

void RadarMap::write_pgm(std::ostream& os) const {
  const std::uint32_t peak = *std::max_element(grid_.begin(), grid_.end());
  os << "P5\n" << azimuth_bins_ << ' ' << range_bins_ << "\n255\n";
  std::string pixels(grid_.size(), '\0');
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double level = peak == 0 ? 0.0 : 255.0 * grid_[i] / peak;
    pixels[i] = static_cast<char>(static_cast<unsigned char>(std::lround(level)));
  }
  os.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

std::size_t DecodeStats::rejected_total() const {
  return std::accumulate(rejected.begin(), rejected.end(), std::size_t{0});
}

DecodedFile decode_cluster_stream(std::istream& is) {
  DecodedFile out;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    try {
      out.clusters.push_back(decode_cluster(line));
      ++out.stats.accepted;
    } catch (const DecodeError& e) {
      ++out.stats.rejected[static_cast<std::size_t>(e.kind())];
    }
  }
  return out;
}

}  // namespace rasim
