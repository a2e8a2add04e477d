#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "commsense/campaign.hpp"
#include "commsense/detector.hpp"
#include "commsense/radar_baseline.hpp"

namespace commsense::cli {

// Everything a pipeline run needs. Each section of the JSON file is
// optional; absent keys keep the defaults below, unknown keys are errors.
struct RunConfig {
  ScenarioSpec campaign;
  TrainOptions detector;
  double train_fraction = 0.5;
  double epsilon = 0.01;
  std::vector<double> bandwidths_mhz{5.0, 10.0, 15.0, 20.0};
  double beta_step_deg = 1.0;
  double beta_max_deg = 179.0;
  std::vector<CellSpec> cells = default_cells();
  unsigned workers = 1;

  void validate() const;
};

// Throws UsageError on unknown keys or wrongly typed values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace commsense::cli
