#ifndef RASIM_MODEM_HPP
#define RASIM_MODEM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rasim/lidar.hpp"

namespace rasim {

using Complex = std::complex<double>;

inline constexpr unsigned kQam16BitsPerSymbol = 4;

// Constellation indexed by its 4-bit label b3b2b1b0. b3b2 picks I and b1b0
// picks Q through the per-axis Gray table 00->-3, 01->-1, 11->+1, 10->+3,
// scaled by 1/sqrt(10) for unit average energy.
const std::array<Complex, 16>& qam16_constellation();

// One bit per element (0 or 1), MSB of each nibble first.
// Throws std::invalid_argument when bits.size() is not a multiple of 4.
std::vector<Complex> map_bits(std::span<const std::uint8_t> bits);

// Circularly-symmetric complex Gaussian noise of total variance
// 10^(-snr_db/10). snr_db = +inf disables the noise; NaN and -inf throw.
std::vector<Complex> apply_awgn(std::span<const Complex> symbols, double snr_db, Rng& rng);

// Minimum-distance hard decision; equidistant ties go to the lowest label.
std::uint8_t decide_label(Complex sample);
std::vector<std::uint8_t> demap_symbols(std::span<const Complex> rx);

// Throws std::invalid_argument on empty or mismatched input.
double evm_rms(std::span<const Complex> tx, std::span<const Complex> rx);

// -20*log10(evm). Throws std::domain_error for evm <= 0.
double snr_from_evm(double evm);

struct ConstellationFrame {
  std::vector<Complex> tx_symbols;
  std::vector<Complex> rx_symbols;
  double snr_db_applied = 0.0;
  double evm_rms = 0.0;
  double ber = 0.0;
  std::uint64_t seed = 0;
};

// Random payload of n_symbols, mapped, passed through AWGN at snr_db and demapped.
ConstellationFrame run_modem(double snr_db, std::size_t n_symbols, std::uint64_t seed);

// index,tx_i,tx_q,rx_i,rx_q with a commented snr_db,evm_rms,ber footer.
void write_constellation_csv(std::ostream& os, const ConstellationFrame& frame);

}  // namespace rasim

#endif  // RASIM_MODEM_HPP
