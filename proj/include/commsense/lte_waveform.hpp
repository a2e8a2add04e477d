#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace commsense {

using cplx = std::complex<double>;

// Simplified LTE downlink numerology: one antenna port, normal cyclic
// prefix count (14 symbols per subframe) with a uniform CP length.
struct GridConfig {
  int fft_size = 512;
  double subcarrier_spacing = 15000.0;
  int occupied_subcarriers = 300;
  int symbols_per_subframe = 14;
  int cp_length = 64;
  std::uint64_t cell_seed = 0;
  double carrier_frequency = 2.35e9;

  // Throws DataError when any invariant is broken.
  void validate() const;

  double sample_rate() const { return subcarrier_spacing * fft_size; }
  double cp_duration() const { return cp_length / sample_rate(); }

  // Baseband frequency of occupied subcarrier k. The occupied band is
  // centred on DC and DC itself carries nothing: the lower half maps to
  // negative frequencies, the upper half starts one spacing above DC.
  double subcarrier_frequency(int k) const;

  // FFT bin carrying occupied subcarrier k.
  int fft_bin(int k) const;
};

struct Pilot {
  int subcarrier = 0;
  int symbol = 0;
  cplx value;
};

using PilotMap = std::vector<Pilot>;

// Occupied-subcarrier x symbol lattice. The pilot mask is a function of the
// config alone, so every grid built for a config carries the CRS positions.
class ResourceGrid {
 public:
  explicit ResourceGrid(const GridConfig& config);

  const GridConfig& config() const { return config_; }
  int subcarriers() const { return config_.occupied_subcarriers; }
  int symbols() const { return config_.symbols_per_subframe; }

  cplx& at(int subcarrier, int symbol) { return cells_[index(subcarrier, symbol)]; }
  const cplx& at(int subcarrier, int symbol) const { return cells_[index(subcarrier, symbol)]; }
  bool is_pilot(int subcarrier, int symbol) const { return pilot_mask_[index(subcarrier, symbol)]; }

  // Symbol-major storage: the column for one OFDM symbol is contiguous.
  std::span<cplx> symbol_column(int symbol);
  std::span<const cplx> symbol_column(int symbol) const;
  std::span<const cplx> cells() const { return cells_; }

  std::size_t pilot_count() const;
  double energy() const;

 private:
  std::size_t index(int subcarrier, int symbol) const {
    return static_cast<std::size_t>(symbol) * config_.occupied_subcarriers + subcarrier;
  }

  GridConfig config_;
  std::vector<cplx> cells_;
  std::vector<bool> pilot_mask_;
};

// CRS lattice: symbols 0 and 4 of each 7-symbol slot, every 6th subcarrier.
// The symbol-4 lattice sits 3 subcarriers above the symbol-0 lattice and the
// base offset is cell_seed mod 6. Values are seeded QPSK points, ordered by
// symbol then subcarrier.
PilotMap generate_crs(const GridConfig& config);

ResourceGrid build_subframe_grid(const GridConfig& config, std::uint64_t payload_seed);

// Time-domain samples, symbols_per_subframe * (fft_size + cp_length) long.
// Uses a unitary inverse DFT, so each symbol body carries exactly the
// energy of its grid column.
std::vector<cplx> ofdm_modulate(const ResourceGrid& grid);

// Assumes symbol-aligned samples. Throws DataError on a length mismatch.
ResourceGrid ofdm_demodulate(std::span<const cplx> samples, const GridConfig& config);

}  // namespace commsense
