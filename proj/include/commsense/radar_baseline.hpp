#pragma once

#include <span>
#include <string>
#include <vector>

namespace commsense {

struct BistaticConfig {
  double bandwidth = 20e6;  // Hz
  double beta = 0.0;        // bistatic angle, radians in [0, pi)
};

// c / (2 B cos(beta / 2)). Rejects beta >= pi, where the forward-scatter
// geometry has no range resolution.
double bistatic_range_resolution(const BistaticConfig& config);

double wavelength(double frequency);

struct CellSpec {
  std::string name;
  double radius = 0.0;
  double tower_height = 10.0;
  double ue_height = 2.0;
};

struct TimingRow {
  std::string name;
  double radius = 0.0;
  double delta_t = 0.0;
};

// Wide-area small/large (3 km, 6 km) and home-area small/large (0.5 km, 1 km).
std::vector<CellSpec> default_cells();

std::vector<TimingRow> timing_precision_table(std::span<const CellSpec> cells);

struct RangeSweepRow {
  double beta_deg = 0.0;
  double bandwidth_mhz = 0.0;
  double delta_r = 0.0;
};

// Every bandwidth over beta = 0, step, 2 step, ... <= max_deg (max_deg < 180).
std::vector<RangeSweepRow> range_resolution_sweep(std::span<const double> bandwidths_mhz, double step_deg,
                                                  double max_deg);

// beta_deg,B_MHz,delta_R_m
std::string format_range_sweep(const std::vector<RangeSweepRow>& rows);
// cell,radius_m,delta_t_s
std::string format_timing_table(const std::vector<TimingRow>& rows);

}  // namespace commsense
