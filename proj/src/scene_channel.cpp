#include "commsense/scene_channel.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "commsense/errors.hpp"

namespace commsense {

namespace {

using Point = std::array<double, 3>;

double distance(const Point& p, const Point& q) {
  return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
}

}  // namespace

void SceneGeometry::validate() const {
  if (!(tower_height > 0.0) || !(ue_height > 0.0) || !(bs_ue_distance > 0.0)) {
    throw DataError("tower height, UE height and BS-UE distance must be positive");
  }
  if (reflector_count < 0 || reflector_count > 2) {
    throw DataError(fmt::format("reflector_count must be 0, 1 or 2, got {}", reflector_count));
  }
  if (reflector_count > 0) {
    if (!(reflector_distance > 0.0)) {
      throw DataError("reflector placed on the UE position (reflector_distance must be positive)");
    }
    if (!(circumferential_fraction >= 0.0 && circumferential_fraction <= 1.0)) {
      throw DataError(fmt::format("circumferential fraction must lie in [0, 1], got {}",
                                  circumferential_fraction));
    }
  }
  // (reference / path)^2 is at most 1, so a scale above 1 could let a
  // reflection outshine the direct path.
  if (!(reflector_gain_scale > 0.0 && reflector_gain_scale <= 1.0)) {
    throw DataError(fmt::format("reflector_gain_scale must lie in (0, 1], got {}", reflector_gain_scale));
  }
}

ArcChord intra_reflector_distance(double distance, double fraction) {
  if (!(distance > 0.0)) throw DataError(fmt::format("distance must be positive, got {}", distance));
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw DataError(fmt::format("fraction must lie in [0, 1], got {}", fraction));
  }
  const double arc = fraction * std::numbers::pi * distance;
  return {arc, 2.0 * distance * std::sin(arc / (2.0 * distance))};
}

PathSet reflector_paths(const SceneGeometry& scene, double carrier_frequency) {
  scene.validate();
  if (!(carrier_frequency > 0.0)) throw DataError("carrier frequency must be positive");

  const Point tower{scene.bs_ue_distance, 0.0, scene.tower_height};
  const Point ue{0.0, 0.0, scene.ue_height};
  const double direct = distance(tower, ue);

  PathSet paths{{0.0, cplx(1.0, 0.0)}};
  for (int r = 0; r < scene.reflector_count; ++r) {
    const double arc = r == 0 ? 0.0 : intra_reflector_distance(scene.reflector_distance,
                                                               scene.circumferential_fraction).arc;
    const double angle = arc / scene.reflector_distance;
    const Point reflector{scene.reflector_distance * std::cos(angle),
                          scene.reflector_distance * std::sin(angle), 0.0};
    const double length = distance(tower, reflector) + distance(reflector, ue);
    const double delay = (length - direct) / kSpeedOfLight;
    const double magnitude = scene.reflector_gain_scale * (direct / length) * (direct / length);
    const double phase = -2.0 * std::numbers::pi * carrier_frequency * delay;
    paths.push_back({delay, std::polar(magnitude, phase)});
  }
  return paths;
}

std::vector<cplx> frequency_response(const PathSet& paths, const GridConfig& config) {
  config.validate();
  for (const auto& p : paths) {
    if (p.excess_delay < 0.0 || p.excess_delay > config.cp_duration()) {
      throw DataError(fmt::format("path delay {} s outside [0, cyclic prefix {} s]", p.excess_delay,
                                  config.cp_duration()));
    }
  }
  std::vector<cplx> response(config.occupied_subcarriers);
  for (int k = 0; k < config.occupied_subcarriers; ++k) {
    const double f = config.subcarrier_frequency(k);
    cplx sum{};
    for (const auto& p : paths) sum += p.gain * std::polar(1.0, -2.0 * std::numbers::pi * f * p.excess_delay);
    response[k] = sum;
  }
  return response;
}

ResourceGrid apply_channel(const ResourceGrid& grid, std::span<const cplx> response, double snr_db,
                           std::uint64_t noise_seed) {
  if (response.size() != static_cast<std::size_t>(grid.subcarriers())) {
    throw DataError(fmt::format("channel response has {} entries, grid has {} subcarriers",
                                response.size(), grid.subcarriers()));
  }
  ResourceGrid out = grid;
  for (int l = 0; l < out.symbols(); ++l) {
    auto column = out.symbol_column(l);
    for (int k = 0; k < out.subcarriers(); ++k) column[k] *= response[k];
  }
  if (std::isinf(snr_db) && snr_db > 0.0) return out;

  const double cells = static_cast<double>(out.cells().size());
  const double signal_power = out.energy() / cells;
  const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(noise_power / 2.0));
  for (int l = 0; l < out.symbols(); ++l) {
    for (auto& c : out.symbol_column(l)) {
      const double re = normal(rng);
      const double im = normal(rng);
      c += cplx(re, im);
    }
  }
  return out;
}

double timing_precision(double tower_height, double ue_height, double distance) {
  if (!(tower_height > 0.0) || !(ue_height > 0.0) || !(distance > 0.0)) {
    throw DataError("tower height, UE height and distance must be positive");
  }
  const double bounce = distance / 2.0;
  const double to_target = std::hypot(tower_height, bounce);
  const double to_ue = std::hypot(ue_height, distance - bounce);
  const double direct = std::hypot(tower_height - ue_height, distance);
  return (to_target + to_ue - direct) / kSpeedOfLight;
}

}  // namespace commsense
