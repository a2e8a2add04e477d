#include "commsense/campaign.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <thread>
#include <tuple>

#include "commsense/csv.hpp"
#include "commsense/errors.hpp"

namespace commsense {

namespace {

constexpr std::string_view kFixedColumns = "scenario_id,class,D_m,x,reading_idx,seed";
constexpr std::size_t kFixedColumnCount = 6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-scenario quantities shared by every reading of a recording.
struct RecordingContext {
  std::vector<cplx> response;
  PilotMap pilots;
};

RecordingContext prepare(const ScenarioSpec& spec, const Scenario& scenario) {
  SceneGeometry scene = spec.scene;
  scene.reflector_count = static_cast<int>(scenario.label);
  scene.reflector_distance = scenario.distance;
  scene.circumferential_fraction = scenario.fraction;
  const auto paths = reflector_paths(scene, spec.grid.carrier_frequency);
  return {frequency_response(paths, spec.grid), generate_crs(spec.grid)};
}

CirFeature capture(const ScenarioSpec& spec, const RecordingContext& ctx, std::uint64_t seed) {
  const auto transmitted = build_subframe_grid(spec.grid, splitmix64(seed ^ 0x1ULL));
  const auto received = apply_channel(transmitted, ctx.response, spec.snr_db, splitmix64(seed ^ 0x2ULL));
  const auto estimate = estimate_channel_ls(received, ctx.pilots);
  const auto cir = cir_from_estimates(estimate.values);
  return extract_feature(cir, spec.taps);
}

void check_feature(const std::vector<double>& taps, std::size_t line) {
  double norm_sq = 0.0;
  for (double t : taps) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw DataError(fmt::format("line {}: tap values must be finite and non-negative", line));
    }
    norm_sq += t * t;
  }
  if (norm_sq != 0.0 && std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
    throw DataError(fmt::format("line {}: feature norm {} is not 1", line, std::sqrt(norm_sq)));
  }
}

}  // namespace

std::string_view to_string(ObjectClass label) {
  switch (label) {
    case ObjectClass::None:
      return "NONE";
    case ObjectClass::One:
      return "ONE";
    case ObjectClass::Two:
      return "TWO";
  }
  return "?";
}

ObjectClass parse_object_class(std::string_view text) {
  if (text == "NONE") return ObjectClass::None;
  if (text == "ONE") return ObjectClass::One;
  if (text == "TWO") return ObjectClass::Two;
  throw DataError(fmt::format("unknown class '{}'", text));
}

void ScenarioSpec::validate() const {
  if (readings_per_recording < 1) throw DataError("readings_per_recording must be at least 1");
  if (classes.empty()) throw DataError("at least one class is required");
  const bool needs_distances = std::any_of(classes.begin(), classes.end(),
                                           [](ObjectClass c) { return c != ObjectClass::None; });
  const bool needs_fractions = std::find(classes.begin(), classes.end(), ObjectClass::Two) != classes.end();
  if (needs_distances && distances.empty()) throw DataError("distance list is empty");
  if (needs_fractions && fractions.empty()) throw DataError("fraction list is empty");
  for (double d : distances) {
    if (!(d > 0.0)) throw DataError(fmt::format("distances must be positive, got {}", d));
  }
  for (double x : fractions) {
    if (!(x >= 0.0 && x <= 1.0)) throw DataError(fmt::format("fractions must lie in [0, 1], got {}", x));
  }
  if (taps == 0) throw DataError("taps must be positive");
  grid.validate();
  if (taps > static_cast<std::size_t>(grid.occupied_subcarriers / 3)) {
    throw DataError(fmt::format("taps ({}) exceeds the pilot subcarrier count ({})", taps,
                                grid.occupied_subcarriers / 3));
  }
}

std::vector<Scenario> enumerate_scenarios(const ScenarioSpec& spec) {
  spec.validate();
  auto wants = [&](ObjectClass c) {
    return std::find(spec.classes.begin(), spec.classes.end(), c) != spec.classes.end();
  };
  std::vector<Scenario> scenarios;
  int id = 0;
  if (wants(ObjectClass::None)) scenarios.push_back({id++, ObjectClass::None, 0.0, 0.0});
  if (wants(ObjectClass::One)) {
    for (double d : spec.distances) scenarios.push_back({id++, ObjectClass::One, d, 0.0});
  }
  if (wants(ObjectClass::Two)) {
    for (double d : spec.distances) {
      for (double x : spec.fractions) scenarios.push_back({id++, ObjectClass::Two, d, x});
    }
  }
  return scenarios;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t scenario_id, std::uint64_t reading_index) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ scenario_id);
  return splitmix64(h ^ reading_index);
}

CirFeature simulate_reading(const ScenarioSpec& spec, const Scenario& scenario, std::uint64_t seed) {
  return capture(spec, prepare(spec, scenario), seed);
}

Dataset run_campaign(const ScenarioSpec& spec, unsigned workers) {
  const auto scenarios = enumerate_scenarios(spec);
  const auto per = static_cast<std::size_t>(spec.readings_per_recording);

  // Built up front so geometry errors surface on the calling thread.
  std::vector<RecordingContext> contexts;
  contexts.reserve(scenarios.size());
  for (const auto& scenario : scenarios) contexts.push_back(prepare(spec, scenario));

  Dataset dataset;
  dataset.records.resize(scenarios.size() * per);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t s = next++; s < scenarios.size(); s = next++) {
      const auto& scenario = scenarios[s];
      const auto& ctx = contexts[s];
      for (std::size_t r = 0; r < per; ++r) {
        auto& rec = dataset.records[s * per + r];
        rec.scenario_id = scenario.id;
        rec.label = scenario.label;
        rec.distance = scenario.distance;
        rec.fraction = scenario.fraction;
        rec.reading_index = static_cast<int>(r);
        rec.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(scenario.id), r);
        rec.taps = capture(spec, ctx, rec.seed).taps;
      }
    }
  };

  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(scenarios.size(), 1)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return dataset;
}

std::string format_dataset(const Dataset& dataset) {
  const std::size_t taps = dataset.empty() ? 0 : dataset.records.front().taps.size();
  std::string out(kFixedColumns);
  for (std::size_t i = 0; i < taps; ++i) out += fmt::format(",tap_{}", i);
  out += '\n';
  for (const auto& r : dataset.records) {
    if (r.taps.size() != taps) throw DataError("records have inconsistent feature lengths");
    out += fmt::format("{},{},{},{},{},{}", r.scenario_id, to_string(r.label), csv::format_double(r.distance),
                       csv::format_double(r.fraction), r.reading_index, r.seed);
    for (double t : r.taps) {
      out += ',';
      out += csv::format_double(t);
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  csv::write_file(path, format_dataset(dataset));
}

Dataset parse_dataset(const std::vector<std::string>& lines) {
  if (lines.empty()) throw DataError("line 1: missing header");
  const auto header = csv::split(lines.front());
  if (header.size() < kFixedColumnCount ||
      lines.front().compare(0, kFixedColumns.size(), kFixedColumns) != 0) {
    throw DataError(fmt::format("line 1: expected header starting with '{}'", kFixedColumns));
  }
  const std::size_t taps = header.size() - kFixedColumnCount;
  for (std::size_t i = 0; i < taps; ++i) {
    if (header[kFixedColumnCount + i] != fmt::format("tap_{}", i)) {
      throw DataError(fmt::format("line 1: expected column tap_{}", i));
    }
  }

  Dataset dataset;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (lines[n].empty()) {
      if (n + 1 == lines.size()) break;
      throw DataError(fmt::format("line {}: empty row", line_no));
    }
    const auto fields = csv::split(lines[n]);
    if (fields.size() != header.size()) {
      throw DataError(fmt::format("line {}: expected {} fields, got {}", line_no, header.size(), fields.size()));
    }
    try {
      Record r;
      r.scenario_id = static_cast<int>(csv::parse_int(fields[0], "scenario_id"));
      r.label = parse_object_class(fields[1]);
      r.distance = csv::parse_double(fields[2], "D_m");
      r.fraction = csv::parse_double(fields[3], "x");
      r.reading_index = static_cast<int>(csv::parse_int(fields[4], "reading_idx"));
      r.seed = csv::parse_uint(fields[5], "seed");
      r.taps.reserve(taps);
      for (std::size_t i = 0; i < taps; ++i) r.taps.push_back(csv::parse_double(fields[kFixedColumnCount + i], "tap"));
      check_feature(r.taps, line_no);
      dataset.records.push_back(std::move(r));
    } catch (const DataError& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      throw DataError(fmt::format("line {}: {}", line_no, what));
    }
  }
  return dataset;
}

Dataset load_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset(csv::read_lines(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError(fmt::format("train fraction must lie in (0, 1), got {}", train_fraction));
  }
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    strata[{static_cast<int>(r.label), r.distance, r.fraction}].push_back(i);
  }

  std::vector<bool> in_train(dataset.records.size(), false);
  std::uint64_t stratum_index = 0;
  for (auto& [key, members] : strata) {
    if (members.size() < 2) {
      throw DataError(fmt::format("stratum (class {}, D {}, x {}) has fewer than 2 records",
                                  to_string(static_cast<ObjectClass>(std::get<0>(key))), std::get<1>(key),
                                  std::get<2>(key)));
    }
    std::mt19937_64 rng(derive_seed(seed, stratum_index++, 0));
    std::shuffle(members.begin(), members.end(), rng);
    auto take = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    take = std::clamp<std::size_t>(take, 1, members.size() - 1);
    for (std::size_t i = 0; i < take; ++i) in_train[members[i]] = true;
  }

  Dataset train;
  Dataset test;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    (in_train[i] ? train : test).records.push_back(dataset.records[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace commsense
