#include "commands.hpp"

#include <fmt/format.h>

#include "commsense/campaign.hpp"
#include "commsense/csv.hpp"
#include "commsense/detector.hpp"
#include "commsense/errors.hpp"
#include "commsense/metrics.hpp"
#include "commsense/radar_baseline.hpp"
#include "commsense/resolution.hpp"

namespace commsense::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config, json extra) {
  const json echo = to_json(config);
  csv::write_file(dir / "config.json", echo.dump(2) + "\n");
  json manifest = {
      {"command", command},
      {"version", kVersion},
      {"master_seed", config.campaign.master_seed},
      {"detector_seed", config.detector.seed},
      {"config", echo},
  };
  for (auto& [key, value] : extra.items()) manifest[key] = value;
  csv::write_file(dir / fmt::format("manifest_{}.json", command), manifest.dump(2) + "\n");
}

Dataset select_part(const fs::path& dataset_path, const RunConfig& config, bool whole, bool train_part) {
  auto dataset = load_dataset(dataset_path);
  if (whole) return dataset;
  auto [train, test] = split_train_test(dataset, config.train_fraction, config.detector.seed);
  return train_part ? std::move(train) : std::move(test);
}

template <typename Fn>
auto with_path(const fs::path& path, Fn&& fn) {
  try {
    return fn(csv::read_lines(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string summary_row(const std::string& scope, const ConfusionCounts& c) {
  auto value = [](auto fn, const ConfusionCounts& counts) {
    try {
      return csv::format_double(fn(counts));
    } catch (const DataError&) {
      return std::string("nan");
    }
  };
  return fmt::format("{},{},{},{},{},{}\n", scope, value(accuracy, c), value(far, c), value(frr, c),
                     c.impostor_attempts, c.legitimate_attempts);
}

}  // namespace

void cmd_simulate(const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  prepare_dir(out_dir);
  const auto dataset = run_campaign(config.campaign, config.workers);
  save_dataset(dataset, out_dir / "dataset.csv");
  write_manifest(out_dir, "simulate", config,
                 {{"records", dataset.size()}, {"recordings", enumerate_scenarios(config.campaign).size()}});
}

void cmd_train(const fs::path& dataset_path, const RunConfig& config, const fs::path& out_dir, bool whole_dataset) {
  config.validate();
  const auto train = select_part(dataset_path, config, whole_dataset, true);
  const auto model = train_cascade(train, config.detector);
  prepare_dir(out_dir);
  save_model(model, out_dir / "model.csv");
  write_manifest(out_dir, "train", config,
                 {{"dataset", dataset_path.filename().string()}, {"training_records", train.size()},
                  {"whole_dataset", whole_dataset}});
}

std::vector<std::string> cmd_evaluate(const fs::path& dataset_path, const fs::path& model_path,
                                      const RunConfig& config, const fs::path& out_dir, bool whole_dataset) {
  config.validate();
  if (!fs::exists(model_path)) throw IoError(fmt::format("model file '{}' does not exist", model_path.string()));
  const auto model = load_model(model_path);
  const auto test = select_part(dataset_path, config, whole_dataset, false);
  const auto ev = score_predictions(model, test);

  prepare_dir(out_dir);
  csv::write_file(out_dir / "metrics.csv", format_metrics(ev.rows));
  csv::write_file(out_dir / "scores.csv", format_scores(ev.scores));

  std::string summary = "scope,accuracy,far,frr,impostor_attempts,legitimate_attempts\n";
  summary += summary_row("presence", ev.presence);
  summary += summary_row("count", ev.count);
  summary += fmt::format("cascade,{},nan,nan,0,{}\n",
                         csv::format_double(static_cast<double>(ev.cascade_correct) / static_cast<double>(ev.records)),
                         ev.records);
  csv::write_file(out_dir / "summary.csv", summary);

  std::string warnings;
  for (const auto& w : ev.warnings) warnings += w + "\n";
  csv::write_file(out_dir / "warnings.txt", warnings);
  write_manifest(out_dir, "evaluate", config,
                 {{"dataset", dataset_path.filename().string()}, {"model", model_path.filename().string()},
                  {"evaluated_records", test.size()}, {"warnings", ev.warnings.size()},
                  {"whole_dataset", whole_dataset}});
  return ev.warnings;
}

void cmd_resolution(const fs::path& metrics_path, const fs::path& scores_path, const std::string& method,
                    double epsilon, const RunConfig& config, const fs::path& out_dir) {
  if (method != "np" && method != "cr" && method != "both") {
    throw UsageError(fmt::format("method must be np, cr or both, got '{}'", method));
  }
  std::vector<ResolutionCurve> curves;
  if (method != "cr") {
    if (metrics_path.empty()) throw UsageError("the np method needs --metrics");
    const auto far_curves =
        with_path(metrics_path, [](const auto& lines) { return parse_metric_curves(lines, "far"); });
    if (far_curves.empty()) throw DataError(fmt::format("{}: no metric rows", metrics_path.string()));
    curves.push_back(np_resolution_curve(far_curves, epsilon));
  }
  if (method != "np") {
    if (scores_path.empty()) throw UsageError("the cr method needs --scores");
    const auto scores = with_path(scores_path, [](const auto& lines) { return parse_scores(lines); });
    curves.push_back(crlb_resolution(scores, epsilon));
  }

  prepare_dir(out_dir);
  csv::write_file(out_dir / "resolution.csv", format_resolution(curves));
  csv::write_file(out_dir / "resolution_meta.csv", format_resolution_meta(curves));
  write_manifest(out_dir, "resolution", config, {{"method", method}, {"epsilon", epsilon}});
}

void cmd_baseline(const RunConfig& config, const fs::path& out_dir) {
  const auto sweep = range_resolution_sweep(config.bandwidths_mhz, config.beta_step_deg, config.beta_max_deg);
  const auto table = timing_precision_table(config.cells);
  prepare_dir(out_dir);
  csv::write_file(out_dir / "range_resolution.csv", format_range_sweep(sweep));
  csv::write_file(out_dir / "timing_precision.csv", format_timing_table(table));
  write_manifest(out_dir, "baseline", config, json::object());
}

}  // namespace commsense::cli
