#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "commsense/lte_waveform.hpp"

namespace commsense {

// Propagation speed used throughout, matching the reference timing tables.
inline constexpr double kSpeedOfLight = 3e8;

// Noise switch for apply_channel.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

// Bistatic scene. The UE stands at the ground origin; the base station is
// bs_ue_distance metres away along +x. Reflectors sit on the ground on a
// circle of radius reflector_distance around the UE, reflector 1 at arc
// offset 0 (facing the base station), reflector 2 at arc offset
// x * pi * reflector_distance.
struct SceneGeometry {
  double tower_height = 10.0;
  double ue_height = 2.0;
  double bs_ue_distance = 500.0;
  double reflector_distance = 0.0;
  double circumferential_fraction = 0.0;
  int reflector_count = 0;
  double reflector_gain_scale = 1.0;

  void validate() const;
};

struct Path {
  double excess_delay = 0.0;  // seconds, relative to the direct path
  cplx gain;
};

// Direct path first, then one entry per reflector.
using PathSet = std::vector<Path>;

struct ArcChord {
  double arc = 0.0;    // along the circle
  double chord = 0.0;  // straight line between the reflectors
};

ArcChord intra_reflector_distance(double distance, double fraction);

PathSet reflector_paths(const SceneGeometry& scene, double carrier_frequency);

// H[k] over the occupied subcarriers. Rejects any path delay longer than the
// cyclic prefix, where the per-subcarrier model stops being exact.
std::vector<cplx> frequency_response(const PathSet& paths, const GridConfig& config);

// Multiplies each row by H[k] and adds circular Gaussian noise at the given
// SNR relative to the mean received cell power. snr_db == kNoiseless skips
// the noise entirely.
ResourceGrid apply_channel(const ResourceGrid& grid, std::span<const cplx> response, double snr_db,
                           std::uint64_t noise_seed);

// Best-case direct/reflected arrival difference for a target bouncing the
// ray halfway between tower (height a) and UE (height b) separated by c.
double timing_precision(double tower_height, double ue_height, double distance);

}  // namespace commsense
