#pragma once

#include <span>
#include <vector>

#include "commsense/lte_waveform.hpp"

namespace commsense {

// Least-squares pilot estimates, one per pilot-bearing subcarrier in
// ascending order. Both shifted CRS lattices are merged, so the estimates
// sit on every third subcarrier.
struct ChannelEstimate {
  std::vector<int> subcarriers;
  std::vector<cplx> values;
};

// Magnitudes of the first L CIR taps scaled to unit Euclidean norm. An
// all-zero CIR gives an all-zero feature with `degenerate` set.
struct CirFeature {
  std::vector<double> taps;
  bool degenerate = false;
};

// Throws DataError when the pilot map does not match the grid's pilot mask.
ChannelEstimate estimate_channel_ls(const ResourceGrid& received, const PilotMap& transmitted);

// Unitary inverse DFT over the estimate sequence: a constant estimate c
// becomes an impulse of magnitude |c| * sqrt(N) at tap 0.
std::vector<cplx> cir_from_estimates(std::span<const cplx> estimates);

CirFeature extract_feature(std::span<const cplx> cir, std::size_t taps);

}  // namespace commsense
