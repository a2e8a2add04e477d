// commsense: simulate, train, evaluate, resolution, baseline.
//
// Exit codes: 0 success, 2 usage, 3 data error, 4 IO error. Failures print
// one line "commsense: error[<kind>]: <message>" on stderr.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "commsense/errors.hpp"
#include "run_config.hpp"

namespace {

using namespace commsense;
using namespace commsense::cli;
namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

int fail(const char* kind, std::string message, int code) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  fmt::print(stderr, "commsense: error[{}]: {}\n", kind, message);
  return code;
}

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<int> readings;
  std::vector<double> distances;
  std::vector<double> fractions;
  std::optional<double> snr_db;
  std::vector<std::string> classes;
  std::optional<double> margin;
  std::optional<int> epochs;
  std::optional<double> epsilon;
  std::vector<double> bandwidths;

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.campaign.master_seed = *seed;
    if (workers) cfg.workers = *workers;
    if (readings) cfg.campaign.readings_per_recording = *readings;
    if (!distances.empty()) cfg.campaign.distances = distances;
    if (!fractions.empty()) cfg.campaign.fractions = fractions;
    if (snr_db) cfg.campaign.snr_db = *snr_db;
    if (!classes.empty()) {
      cfg.campaign.classes.clear();
      for (const auto& c : classes) {
        try {
          cfg.campaign.classes.push_back(parse_object_class(c));
        } catch (const DataError& e) {
          throw UsageError(fmt::format("--classes: {}", e.what()));
        }
      }
    }
    if (margin) cfg.detector.margin_param = *margin;
    if (epochs) cfg.detector.epochs = *epochs;
    if (epsilon) cfg.epsilon = *epsilon;
    if (!bandwidths.empty()) cfg.bandwidths_mhz = bandwidths;
    return cfg;
  }
};

void add_common(CLI::App* cmd, Overrides& o, std::string& out) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed of the simulation campaign");
  cmd->add_option("--out", out, "Output directory")->required();
  cmd->add_option("--workers", o.workers, "Maximum worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passive LTE channel-sensing simulator and metrology toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides o;
  std::string out;
  std::string dataset;
  std::string model;
  std::string metrics;
  std::string scores;
  std::string method = "both";
  bool whole = false;

  auto* simulate = app.add_subcommand("simulate", "Run the reflector campaign and write dataset.csv");
  add_common(simulate, o, out);
  simulate->add_option("--readings", o.readings, "Readings per recording");
  simulate->add_option("--distances", o.distances, "Reflector distances from the UE (m)");
  simulate->add_option("--fractions", o.fractions, "Circumferential fractions x");
  simulate->add_option("--snr", o.snr_db, "SNR in dB");
  simulate->add_option("--classes", o.classes, "Subset of NONE ONE TWO");

  auto* train = app.add_subcommand("train", "Train the cascade detector and write model.csv");
  add_common(train, o, out);
  train->add_option("--dataset", dataset, "Dataset CSV")->required();
  train->add_option("--margin", o.margin, "Regularization weight");
  train->add_option("--epochs", o.epochs, "Training epochs");
  train->add_flag("--whole", whole, "Train on the whole file instead of the training split");

  auto* evaluate = app.add_subcommand("evaluate", "Score the held-out split and write metric tables");
  add_common(evaluate, o, out);
  evaluate->add_option("--dataset", dataset, "Dataset CSV")->required();
  evaluate->add_option("--model", model, "Model file")->required();
  evaluate->add_flag("--whole", whole, "Evaluate the whole file instead of the test split");

  auto* resolution = app.add_subcommand("resolution", "Derive NP and/or CR resolution per distance");
  add_common(resolution, o, out);
  resolution->add_option("--metrics", metrics, "metrics.csv (np method)");
  resolution->add_option("--scores", scores, "scores.csv (cr method)");
  resolution->add_option("--method", method, "np, cr or both")->check(CLI::IsMember({"np", "cr", "both"}));
  resolution->add_option("--epsilon", o.epsilon, "FAR change bound for the np method");

  auto* baseline = app.add_subcommand("baseline", "Write the bistatic range-resolution sweep and timing table");
  add_common(baseline, o, out);
  baseline->add_option("--bandwidths", o.bandwidths, "Bandwidths in MHz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    const RunConfig cfg = o.resolve();
    if (simulate->parsed()) {
      cmd_simulate(cfg, out);
    } else if (train->parsed()) {
      cmd_train(dataset, cfg, out, whole);
    } else if (evaluate->parsed()) {
      for (const auto& w : cmd_evaluate(dataset, model, cfg, out, whole)) fmt::print(stderr, "warning: {}\n", w);
    } else if (resolution->parsed()) {
      cmd_resolution(metrics, scores, method, cfg.epsilon, cfg, out);
    } else if (baseline->parsed()) {
      cmd_baseline(cfg, out);
    }
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const DataError& e) {
    return fail("data", e.what(), kExitData);
  } catch (const IoError& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const std::exception& e) {
    return fail("data", e.what(), kExitData);
  }
  return 0;
}
