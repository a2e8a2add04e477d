#include "run_config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

#include "commsense/errors.hpp"

namespace commsense::cli {

using nlohmann::json;

namespace {

// Reads keys out of one JSON object and remembers which ones were used, so
// leftovers can be reported as typos.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw UsageError(fmt::format("config: '{}' must be an object", path_));
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!doc_.contains(key)) return;
    seen_.insert(key);
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError(fmt::format("config: '{}.{}' has the wrong type", path_, key));
    }
  }

  const json* child(const std::string& key) {
    if (!doc_.contains(key)) return nullptr;
    seen_.insert(key);
    return &doc_.at(key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.contains(key)) throw UsageError(fmt::format("config: unknown key '{}.{}'", path_, key));
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_snr(Section& s, double& snr_db) {
  const json* node = s.child("snr_db");
  if (!node) return;
  if (node->is_string() && node->get<std::string>() == "off") {
    snr_db = kNoiseless;
  } else if (node->is_number()) {
    snr_db = node->get<double>();
  } else {
    throw UsageError("config: 'campaign.snr_db' must be a number or \"off\"");
  }
}

}  // namespace

void RunConfig::validate() const {
  try {
    campaign.validate();
  } catch (const DataError& e) {
    throw UsageError(fmt::format("config: {}", e.what()));
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw UsageError("config: train_fraction must lie in (0, 1)");
  if (!(detector.margin_param > 0.0)) throw UsageError("config: margin_param must be positive");
  if (detector.epochs < 1) throw UsageError("config: epochs must be at least 1");
  if (!(epsilon > 0.0)) throw UsageError("config: epsilon must be positive");
  if (workers < 1) throw UsageError("config: workers must be at least 1");
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  Section root(doc, "config");

  if (const json* node = root.child("grid")) {
    Section s(*node, "grid");
    auto& g = cfg.campaign.grid;
    s.read("fft_size", g.fft_size);
    g.cp_length = g.fft_size / 8;
    s.read("occupied_subcarriers", g.occupied_subcarriers);
    s.read("cp_length", g.cp_length);
    s.read("cell_seed", g.cell_seed);
    s.read("carrier_frequency_hz", g.carrier_frequency);
    s.finish();
  }
  if (const json* node = root.child("scene")) {
    Section s(*node, "scene");
    auto& sc = cfg.campaign.scene;
    s.read("tower_height_m", sc.tower_height);
    s.read("ue_height_m", sc.ue_height);
    s.read("bs_ue_distance_m", sc.bs_ue_distance);
    s.read("reflector_gain_scale", sc.reflector_gain_scale);
    s.finish();
  }
  if (const json* node = root.child("campaign")) {
    Section s(*node, "campaign");
    auto& c = cfg.campaign;
    s.read("distances_m", c.distances);
    s.read("fractions", c.fractions);
    s.read("readings_per_recording", c.readings_per_recording);
    read_snr(s, c.snr_db);
    if (const json* classes = s.child("classes")) {
      if (!classes->is_array()) throw UsageError("config: 'campaign.classes' must be a list");
      c.classes.clear();
      for (const auto& item : *classes) {
        if (!item.is_string()) throw UsageError("config: 'campaign.classes' entries must be strings");
        try {
          c.classes.push_back(parse_object_class(item.get<std::string>()));
        } catch (const DataError& e) {
          throw UsageError(fmt::format("config: campaign.classes: {}", e.what()));
        }
      }
    }
    s.read("master_seed", c.master_seed);
    s.read("taps", c.taps);
    s.finish();
  }
  if (const json* node = root.child("detector")) {
    Section s(*node, "detector");
    s.read("margin_param", cfg.detector.margin_param);
    s.read("epochs", cfg.detector.epochs);
    s.read("seed", cfg.detector.seed);
    s.read("train_fraction", cfg.train_fraction);
    s.finish();
  }
  if (const json* node = root.child("resolution")) {
    Section s(*node, "resolution");
    s.read("epsilon", cfg.epsilon);
    s.finish();
  }
  if (const json* node = root.child("baseline")) {
    Section s(*node, "baseline");
    s.read("bandwidths_mhz", cfg.bandwidths_mhz);
    s.read("beta_step_deg", cfg.beta_step_deg);
    s.read("beta_max_deg", cfg.beta_max_deg);
    if (const json* cells = s.child("cells")) {
      if (!cells->is_array()) throw UsageError("config: 'baseline.cells' must be a list");
      cfg.cells.clear();
      for (const auto& item : *cells) {
        Section cs(item, "baseline.cells[]");
        CellSpec cell;
        cs.read("name", cell.name);
        cs.read("radius_m", cell.radius);
        cs.read("tower_height_m", cell.tower_height);
        cs.read("ue_height_m", cell.ue_height);
        cs.finish();
        cfg.cells.push_back(cell);
      }
    }
    s.finish();
  }
  root.read("workers", cfg.workers);
  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  const auto& c = cfg.campaign;
  json classes = json::array();
  for (auto cls : c.classes) classes.push_back(std::string(to_string(cls)));
  json cells = json::array();
  for (const auto& cell : cfg.cells) {
    cells.push_back({{"name", cell.name},
                     {"radius_m", cell.radius},
                     {"tower_height_m", cell.tower_height},
                     {"ue_height_m", cell.ue_height}});
  }
  json snr = std::isinf(c.snr_db) ? json("off") : json(c.snr_db);
  return {
      {"grid",
       {{"fft_size", c.grid.fft_size},
        {"occupied_subcarriers", c.grid.occupied_subcarriers},
        {"cp_length", c.grid.cp_length},
        {"cell_seed", c.grid.cell_seed},
        {"carrier_frequency_hz", c.grid.carrier_frequency}}},
      {"scene",
       {{"tower_height_m", c.scene.tower_height},
        {"ue_height_m", c.scene.ue_height},
        {"bs_ue_distance_m", c.scene.bs_ue_distance},
        {"reflector_gain_scale", c.scene.reflector_gain_scale}}},
      {"campaign",
       {{"distances_m", c.distances},
        {"fractions", c.fractions},
        {"readings_per_recording", c.readings_per_recording},
        {"snr_db", snr},
        {"classes", classes},
        {"master_seed", c.master_seed},
        {"taps", c.taps}}},
      {"detector",
       {{"margin_param", cfg.detector.margin_param},
        {"epochs", cfg.detector.epochs},
        {"seed", cfg.detector.seed},
        {"train_fraction", cfg.train_fraction}}},
      {"resolution", {{"epsilon", cfg.epsilon}}},
      {"baseline",
       {{"bandwidths_mhz", cfg.bandwidths_mhz},
        {"beta_step_deg", cfg.beta_step_deg},
        {"beta_max_deg", cfg.beta_max_deg},
        {"cells", cells}}},
      {"workers", cfg.workers},
  };
}

}  // namespace commsense::cli
