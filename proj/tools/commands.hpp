#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace commsense::cli {

inline constexpr const char* kVersion = "0.1.0";

// Each command writes its outputs plus config.json (the parsed
// configuration) and manifest_<command>.json into `out_dir`, creating it if
// needed. Nothing time- or host-dependent is written, so reruns with the
// same inputs produce identical files.

// dataset.csv
void cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

// model.csv. Trains on the training half of the stratified split unless
// `whole_dataset` is set.
void cmd_train(const std::filesystem::path& dataset_path, const RunConfig& config,
               const std::filesystem::path& out_dir, bool whole_dataset = false);

// metrics.csv, scores.csv, summary.csv, warnings.txt. Evaluates the held-out
// half of the same split cmd_train used unless `whole_dataset` is set.
// Returns the stratum warnings.
std::vector<std::string> cmd_evaluate(const std::filesystem::path& dataset_path,
                                      const std::filesystem::path& model_path, const RunConfig& config,
                                      const std::filesystem::path& out_dir, bool whole_dataset = false);

// resolution.csv and resolution_meta.csv. `method` is np, cr or both; np
// reads the metrics table, cr the per-reading scores.
void cmd_resolution(const std::filesystem::path& metrics_path, const std::filesystem::path& scores_path,
                    const std::string& method, double epsilon, const RunConfig& config,
                    const std::filesystem::path& out_dir);

// range_resolution.csv and timing_precision.csv.
void cmd_baseline(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace commsense::cli
