#include "commsense/ue_receiver.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>

#include "commsense/dft.hpp"
#include "commsense/errors.hpp"

namespace commsense {

ChannelEstimate estimate_channel_ls(const ResourceGrid& received, const PilotMap& transmitted) {
  if (transmitted.size() != received.pilot_count()) {
    throw DataError(fmt::format("pilot map has {} entries, grid has {} pilot cells", transmitted.size(),
                                received.pilot_count()));
  }

  struct Accumulator {
    cplx sum;
    int count = 0;
  };
  std::map<int, Accumulator> per_subcarrier;
  std::vector<bool> seen(static_cast<std::size_t>(received.subcarriers()) * received.symbols(), false);
  for (const auto& p : transmitted) {
    if (p.subcarrier < 0 || p.subcarrier >= received.subcarriers() || p.symbol < 0 ||
        p.symbol >= received.symbols() || !received.is_pilot(p.subcarrier, p.symbol)) {
      throw DataError(fmt::format("pilot at (subcarrier {}, symbol {}) is not a pilot cell of the grid",
                                  p.subcarrier, p.symbol));
    }
    const auto slot = static_cast<std::size_t>(p.symbol) * received.subcarriers() + p.subcarrier;
    if (seen[slot]) {
      throw DataError(fmt::format("duplicate pilot at (subcarrier {}, symbol {})", p.subcarrier, p.symbol));
    }
    seen[slot] = true;
    if (std::abs(p.value) == 0.0) throw DataError("transmitted pilot has zero amplitude");
    auto& acc = per_subcarrier[p.subcarrier];
    acc.sum += received.at(p.subcarrier, p.symbol) / p.value;
    ++acc.count;
  }

  ChannelEstimate estimate;
  estimate.subcarriers.reserve(per_subcarrier.size());
  estimate.values.reserve(per_subcarrier.size());
  for (const auto& [k, acc] : per_subcarrier) {
    estimate.subcarriers.push_back(k);
    estimate.values.push_back(acc.sum / static_cast<double>(acc.count));
  }
  return estimate;
}

std::vector<cplx> cir_from_estimates(std::span<const cplx> estimates) {
  return dft_inverse(estimates);
}

CirFeature extract_feature(std::span<const cplx> cir, std::size_t taps) {
  if (taps == 0 || taps > cir.size()) {
    throw DataError(fmt::format("cannot take {} taps from a CIR of length {}", taps, cir.size()));
  }
  CirFeature feature;
  feature.taps.resize(taps);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    feature.taps[i] = std::abs(cir[i]);
    norm_sq += feature.taps[i] * feature.taps[i];
  }
  if (norm_sq == 0.0) {
    feature.degenerate = true;
    return feature;
  }
  const double norm = std::sqrt(norm_sq);
  for (auto& t : feature.taps) t /= norm;
  return feature;
}

}  // namespace commsense
