#include "commsense/lte_waveform.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "commsense/dft.hpp"
#include "commsense/errors.hpp"

namespace commsense {

namespace {

constexpr int kSymbolsPerSlot = 7;
constexpr int kPilotSpacing = 6;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

cplx qpsk_point(std::uint64_t bits) {
  const double s = 1.0 / std::sqrt(2.0);
  return {(bits & 1U) ? -s : s, (bits & 2U) ? -s : s};
}

// First pilot subcarrier of a pilot-bearing symbol, or -1 when the symbol
// carries no CRS.
int pilot_offset(const GridConfig& config, int symbol) {
  const int base = static_cast<int>(config.cell_seed % kPilotSpacing);
  switch (symbol % kSymbolsPerSlot) {
    case 0:
      return base;
    case 4:
      return (base + 3) % kPilotSpacing;
    default:
      return -1;
  }
}

}  // namespace

void GridConfig::validate() const {
  if (!is_power_of_two(fft_size)) {
    throw DataError(fmt::format("fft_size must be a power of two, got {}", fft_size));
  }
  if (!(subcarrier_spacing > 0.0)) throw DataError("subcarrier_spacing must be positive");
  if (occupied_subcarriers <= 0 || occupied_subcarriers >= fft_size) {
    throw DataError(fmt::format("occupied_subcarriers must lie in (0, fft_size), got {}",
                                occupied_subcarriers));
  }
  if (occupied_subcarriers % kPilotSpacing != 0) {
    throw DataError(fmt::format("occupied_subcarriers must be divisible by 6, got {}",
                                occupied_subcarriers));
  }
  if (symbols_per_subframe != 14) {
    throw DataError(fmt::format("symbols_per_subframe is fixed at 14, got {}", symbols_per_subframe));
  }
  if (cp_length < 0 || cp_length > fft_size) {
    throw DataError(fmt::format("cp_length must lie in [0, fft_size], got {}", cp_length));
  }
  if (!(carrier_frequency > 0.0)) throw DataError("carrier_frequency must be positive");
}

double GridConfig::subcarrier_frequency(int k) const {
  const int half = occupied_subcarriers / 2;
  const int offset = k < half ? k - half : k - half + 1;
  return offset * subcarrier_spacing;
}

int GridConfig::fft_bin(int k) const {
  const int half = occupied_subcarriers / 2;
  return k < half ? fft_size + (k - half) : k - half + 1;
}

ResourceGrid::ResourceGrid(const GridConfig& config) : config_(config) {
  config_.validate();
  const auto n = static_cast<std::size_t>(config_.occupied_subcarriers) * config_.symbols_per_subframe;
  cells_.assign(n, cplx{});
  pilot_mask_.assign(n, false);
  for (int l = 0; l < config_.symbols_per_subframe; ++l) {
    const int offset = pilot_offset(config_, l);
    if (offset < 0) continue;
    for (int k = offset; k < config_.occupied_subcarriers; k += kPilotSpacing) {
      pilot_mask_[index(k, l)] = true;
    }
  }
}

std::span<cplx> ResourceGrid::symbol_column(int symbol) {
  return std::span<cplx>(cells_).subspan(index(0, symbol), config_.occupied_subcarriers);
}

std::span<const cplx> ResourceGrid::symbol_column(int symbol) const {
  return std::span<const cplx>(cells_).subspan(index(0, symbol), config_.occupied_subcarriers);
}

std::size_t ResourceGrid::pilot_count() const {
  return static_cast<std::size_t>(std::count(pilot_mask_.begin(), pilot_mask_.end(), true));
}

double ResourceGrid::energy() const {
  double sum = 0.0;
  for (const auto& c : cells_) sum += std::norm(c);
  return sum;
}

PilotMap generate_crs(const GridConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.cell_seed);
  PilotMap pilots;
  pilots.reserve(static_cast<std::size_t>(4 * config.occupied_subcarriers / kPilotSpacing));
  for (int l = 0; l < config.symbols_per_subframe; ++l) {
    const int offset = pilot_offset(config, l);
    if (offset < 0) continue;
    for (int k = offset; k < config.occupied_subcarriers; k += kPilotSpacing) {
      pilots.push_back({k, l, qpsk_point(rng())});
    }
  }
  return pilots;
}

ResourceGrid build_subframe_grid(const GridConfig& config, std::uint64_t payload_seed) {
  ResourceGrid grid(config);
  for (const auto& p : generate_crs(config)) grid.at(p.subcarrier, p.symbol) = p.value;

  std::mt19937_64 rng(payload_seed);
  for (int l = 0; l < grid.symbols(); ++l) {
    for (int k = 0; k < grid.subcarriers(); ++k) {
      if (!grid.is_pilot(k, l)) grid.at(k, l) = qpsk_point(rng());
    }
  }
  return grid;
}

std::vector<cplx> ofdm_modulate(const ResourceGrid& grid) {
  const auto& cfg = grid.config();
  const int n = cfg.fft_size;
  const int symbol_len = n + cfg.cp_length;
  std::vector<cplx> samples(static_cast<std::size_t>(symbol_len) * cfg.symbols_per_subframe);

  std::vector<cplx> spectrum(n);
  for (int l = 0; l < cfg.symbols_per_subframe; ++l) {
    std::fill(spectrum.begin(), spectrum.end(), cplx{});
    const auto column = grid.symbol_column(l);
    for (int k = 0; k < cfg.occupied_subcarriers; ++k) spectrum[cfg.fft_bin(k)] = column[k];

    const auto body = dft_inverse(spectrum);
    auto out = samples.begin() + static_cast<std::ptrdiff_t>(l) * symbol_len;
    out = std::copy(body.end() - cfg.cp_length, body.end(), out);
    std::copy(body.begin(), body.end(), out);
  }
  return samples;
}

ResourceGrid ofdm_demodulate(std::span<const cplx> samples, const GridConfig& config) {
  config.validate();
  const int n = config.fft_size;
  const int symbol_len = n + config.cp_length;
  const auto expected = static_cast<std::size_t>(symbol_len) * config.symbols_per_subframe;
  if (samples.size() != expected) {
    throw DataError(fmt::format("expected {} samples for one subframe, got {}", expected, samples.size()));
  }

  ResourceGrid grid(config);
  for (int l = 0; l < config.symbols_per_subframe; ++l) {
    const auto body = samples.subspan(static_cast<std::size_t>(l) * symbol_len + config.cp_length, n);
    const auto spectrum = dft_forward(body);
    auto column = grid.symbol_column(l);
    for (int k = 0; k < config.occupied_subcarriers; ++k) column[k] = spectrum[config.fft_bin(k)];
  }
  return grid;
}

}  // namespace commsense
