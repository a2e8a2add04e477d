#include "commsense/radar_baseline.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "commsense/csv.hpp"
#include "commsense/errors.hpp"
#include "commsense/scene_channel.hpp"

namespace commsense {

double bistatic_range_resolution(const BistaticConfig& config) {
  if (!(config.bandwidth > 0.0)) throw DataError("bandwidth must be positive");
  if (!(config.beta >= 0.0 && config.beta < std::numbers::pi)) {
    throw DataError(fmt::format("bistatic angle must lie in [0, pi), got {} rad", config.beta));
  }
  return kSpeedOfLight / (2.0 * config.bandwidth * std::cos(config.beta / 2.0));
}

double wavelength(double frequency) {
  if (!(frequency > 0.0)) throw DataError(fmt::format("frequency must be positive, got {}", frequency));
  return kSpeedOfLight / frequency;
}

std::vector<CellSpec> default_cells() {
  return {
      {"wide_area_small", 3000.0, 10.0, 2.0},
      {"wide_area_large", 6000.0, 10.0, 2.0},
      {"home_area_small", 500.0, 10.0, 2.0},
      {"home_area_large", 1000.0, 10.0, 2.0},
  };
}

std::vector<TimingRow> timing_precision_table(std::span<const CellSpec> cells) {
  if (cells.empty()) throw DataError("timing table needs at least one cell");
  std::vector<TimingRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) {
    rows.push_back({cell.name, cell.radius, timing_precision(cell.tower_height, cell.ue_height, cell.radius)});
  }
  return rows;
}

std::vector<RangeSweepRow> range_resolution_sweep(std::span<const double> bandwidths_mhz, double step_deg,
                                                  double max_deg) {
  if (bandwidths_mhz.empty()) throw DataError("bandwidth list is empty");
  if (!(step_deg > 0.0)) throw DataError("beta step must be positive");
  if (!(max_deg >= 0.0 && max_deg < 180.0)) throw DataError("beta maximum must lie in [0, 180) degrees");

  const auto steps = static_cast<int>(std::floor(max_deg / step_deg + 1e-9));
  std::vector<RangeSweepRow> rows;
  for (double b : bandwidths_mhz) {
    for (int i = 0; i <= steps; ++i) {
      const double beta_deg = i * step_deg;
      const double delta_r = bistatic_range_resolution({b * 1e6, beta_deg * std::numbers::pi / 180.0});
      rows.push_back({beta_deg, b, delta_r});
    }
  }
  return rows;
}

std::string format_range_sweep(const std::vector<RangeSweepRow>& rows) {
  std::string out = "beta_deg,B_MHz,delta_R_m\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", csv::format_double(r.beta_deg), csv::format_double(r.bandwidth_mhz),
                       csv::format_double(r.delta_r));
  }
  return out;
}

std::string format_timing_table(const std::vector<TimingRow>& rows) {
  std::string out = "cell,radius_m,delta_t_s\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", r.name, csv::format_double(r.radius), csv::format_double(r.delta_t));
  }
  return out;
}

}  // namespace commsense
