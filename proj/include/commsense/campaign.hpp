#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "commsense/lte_waveform.hpp"
#include "commsense/scene_channel.hpp"
#include "commsense/ue_receiver.hpp"

namespace commsense {

enum class ObjectClass { None = 0, One = 1, Two = 2 };

std::string_view to_string(ObjectClass label);
ObjectClass parse_object_class(std::string_view text);

struct ScenarioSpec {
  std::vector<double> distances{0.5, 2.0, 4.0, 7.0, 10.0};
  std::vector<double> fractions{0.00, 0.10, 0.25, 0.50, 0.75, 1.00};
  int readings_per_recording = 1500;
  double snr_db = 7.0;
  std::vector<ObjectClass> classes{ObjectClass::None, ObjectClass::One, ObjectClass::Two};
  std::uint64_t master_seed = 0;

  GridConfig grid;
  // Tower/UE heights, BS distance and gain scale. The reflector fields are
  // overwritten per scenario.
  SceneGeometry scene;
  std::size_t taps = 32;

  void validate() const;
};

// One recording: a fixed scene captured readings_per_recording times.
struct Scenario {
  int id = 0;
  ObjectClass label = ObjectClass::None;
  double distance = 0.0;  // 0 for NONE
  double fraction = 0.0;  // 0 for NONE and ONE
};

struct Record {
  int scenario_id = 0;
  ObjectClass label = ObjectClass::None;
  double distance = 0.0;
  double fraction = 0.0;
  int reading_index = 0;
  std::uint64_t seed = 0;
  std::vector<double> taps;

  bool operator==(const Record&) const = default;
};

struct Dataset {
  std::vector<Record> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  bool operator==(const Dataset&) const = default;
};

// NONE once, ONE per distance (reflector at arc offset 0), TWO per
// (distance, fraction), in that canonical order with ids 0, 1, 2, ...
std::vector<Scenario> enumerate_scenarios(const ScenarioSpec& spec);

// splitmix64-style mix of (master seed, scenario id, reading index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t scenario_id, std::uint64_t reading_index);

// A single noisy capture of the scenario's scene, reduced to its CIR feature.
CirFeature simulate_reading(const ScenarioSpec& spec, const Scenario& scenario, std::uint64_t seed);

// Recordings are fanned out over `workers` threads; the output is the same
// for any worker count.
Dataset run_campaign(const ScenarioSpec& spec, unsigned workers = 1);

// CSV: scenario_id,class,D_m,x,reading_idx,seed,tap_0,...,tap_{L-1}
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string format_dataset(const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(const std::vector<std::string>& lines);

// Stratified by (class, D, x); both halves keep the input order.
std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, double train_fraction, std::uint64_t seed);

}  // namespace commsense
