#include "rasim/modem.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rasim {

namespace {

double gray_level(unsigned two_bits) {
  static constexpr double kLevels[4] = {-3.0, -1.0, +3.0, +1.0};  // 00, 01, 10, 11
  return kLevels[two_bits & 0x3];
}

}  // namespace

const std::array<Complex, 16>& qam16_constellation() {
  static const std::array<Complex, 16> points = [] {
    std::array<Complex, 16> p{};
    const double scale = 1.0 / std::sqrt(10.0);
    for (unsigned label = 0; label < 16; ++label) {
      p[label] = Complex(gray_level(label >> 2) * scale, gray_level(label) * scale);
    }
    return p;
  }();
  return points;
}

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() % kQam16BitsPerSymbol != 0) {
    throw std::invalid_argument("map_bits: bit count must be a multiple of 4");
  }
  const auto& points = qam16_constellation();
  std::vector<Complex> out;
  out.reserve(bits.size() / kQam16BitsPerSymbol);
  for (std::size_t i = 0; i < bits.size(); i += kQam16BitsPerSymbol) {
    unsigned label = 0;
    for (unsigned b = 0; b < kQam16BitsPerSymbol; ++b) label = (label << 1) | (bits[i + b] & 1u);
    out.push_back(points[label]);
  }
  return out;
}

std::vector<Complex> apply_awgn(std::span<const Complex> symbols, double snr_db, Rng& rng) {
  if (std::isnan(snr_db) || snr_db == -INFINITY) {
    throw std::invalid_argument("apply_awgn: snr must be finite or +inf");
  }
  std::vector<Complex> out(symbols.begin(), symbols.end());
  if (std::isinf(snr_db)) return out;
  const double sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0) / 2.0);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& s : out) {
    const double ni = noise(rng);
    const double nq = noise(rng);
    s += Complex(ni, nq);
  }
  return out;
}

std::uint8_t decide_label(Complex sample) {
  const auto& points = qam16_constellation();
  std::uint8_t best = 0;
  double best_d = std::norm(sample - points[0]);
  for (std::uint8_t label = 1; label < 16; ++label) {
    const double d = std::norm(sample - points[label]);
    if (d < best_d) {
      best_d = d;
      best = label;
    }
  }
  return best;
}

std::vector<std::uint8_t> demap_symbols(std::span<const Complex> rx) {
  std::vector<std::uint8_t> bits;
  bits.reserve(rx.size() * kQam16BitsPerSymbol);
  for (const Complex& s : rx) {
    const std::uint8_t label = decide_label(s);
    for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return bits;
}

double evm_rms(std::span<const Complex> tx, std::span<const Complex> rx) {
  if (tx.empty()) throw std::invalid_argument("evm_rms: empty input");
  if (tx.size() != rx.size()) throw std::invalid_argument("evm_rms: length mismatch");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    err += std::norm(rx[i] - tx[i]);
    ref += std::norm(tx[i]);
  }
  return std::sqrt(err / ref);
}

double snr_from_evm(double evm) {
  if (!(evm > 0.0)) throw std::domain_error("snr_from_evm: evm must be positive");
  return -20.0 * std::log10(evm);
}

ConstellationFrame run_modem(double snr_db, std::size_t n_symbols, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<std::uint8_t> bits(n_symbols * kQam16BitsPerSymbol);
  for (auto& b : bits) b = static_cast<std::uint8_t>(bit(rng));

  ConstellationFrame frame;
  frame.seed = seed;
  frame.snr_db_applied = snr_db;
  frame.tx_symbols = map_bits(bits);
  frame.rx_symbols = apply_awgn(frame.tx_symbols, snr_db, rng);
  frame.evm_rms = evm_rms(frame.tx_symbols, frame.rx_symbols);

  const auto decided = demap_symbols(frame.rx_symbols);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) errors += decided[i] != bits[i];
  frame.ber = bits.empty() ? 0.0 : static_cast<double>(errors) / static_cast<double>(bits.size());
  return frame;
}

void write_constellation_csv(std::ostream& os, const ConstellationFrame& frame) {
  os << "index,tx_i,tx_q,rx_i,rx_q\n";
  char buf[160];
  for (std::size_t i = 0; i < frame.tx_symbols.size(); ++i) {
    const Complex& t = frame.tx_symbols[i];
    const Complex& r = frame.rx_symbols[i];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f\n", i, t.real(), t.imag(), r.real(),
                  r.imag());
    os << buf;
  }
  os << "# snr_db,evm_rms,ber\n";
  std::snprintf(buf, sizeof buf, "# %.6f,%.6e,%.6e\n", frame.snr_db_applied, frame.evm_rms,
                frame.ber);
  os << buf;
}

}  // namespace rasim
