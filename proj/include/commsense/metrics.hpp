#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "commsense/campaign.hpp"
#include "commsense/detector.hpp"

namespace commsense {

// Impostor attempts (IA) are presentations that should be rejected; a false
// acceptance (FA) is one that was accepted anyway. Legitimate attempts (EA)
// should be accepted; a false rejection (FR) is one that was not.
struct ConfusionCounts {
  std::size_t false_accepts = 0;       // N_FA
  std::size_t impostor_attempts = 0;   // N_IA
  std::size_t false_rejects = 0;       // N_FR
  std::size_t legitimate_attempts = 0; // N_EA
  std::size_t correct = 0;
  std::size_t total = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  bool operator==(const ConfusionCounts&) const = default;
};

double accuracy(const ConfusionCounts& counts);
double far(const ConfusionCounts& counts);
double frr(const ConfusionCounts& counts);

// One labelled decision: `accepted` is the detector's call, `genuine`
// whether acceptance was the right answer. Outcomes other than accept or
// reject (e.g. a cascade calling NONE) are non-acceptances that still count
// against `correct` when `right` is false.
struct Decision {
  bool genuine = false;
  bool accepted = false;
  bool right = false;
};

ConfusionCounts tally(const std::vector<Decision>& decisions);

struct MetricCurve {
  double distance = 0.0;
  std::string metric;
  std::vector<double> thetas;  // strictly increasing
  std::vector<double> values;
};

// Curve point for one (D, x): TWO readings at (D, x) are the legitimate
// attempts, every ONE reading at D an impostor attempt. Both are judged by
// the count stage alone (score >= 0 accepts), whatever the presence stage
// said. theta is the straight-line reflector separation.
struct MetricRow {
  double distance = 0.0;
  double fraction = 0.0;
  double theta = 0.0;
  ConfusionCounts counts;
};

// Count-stage score of one held-out TWO reading, the per-reading statistic
// fed to the Cramer-Rao resolution.
struct ScoreSample {
  double distance = 0.0;
  int config = 0;  // index of the fraction within its distance
  double theta = 0.0;
  double score = 0.0;
};

struct StratumTally {
  std::size_t records = 0;
  std::size_t correct = 0;
};

struct Evaluation {
  ConfusionCounts presence;  // NONE readings are impostors, object readings legitimate
  ConfusionCounts count;     // count stage alone: ONE readings impostors, TWO legitimate
  std::size_t cascade_correct = 0;
  std::size_t records = 0;
  std::vector<MetricRow> rows;
  std::vector<ScoreSample> scores;
  // Keyed by (class, D, x); partitions the evaluated records.
  std::map<std::tuple<int, double, double>, StratumTally> strata;
  std::vector<std::string> warnings;

  std::vector<MetricCurve> curves(const std::string& metric) const;
};

Evaluation score_predictions(const CascadeModel& model, const Dataset& test);

// D_m,theta_m,accuracy,far,frr
std::string format_metrics(const std::vector<MetricRow>& rows);
std::vector<MetricCurve> parse_metric_curves(const std::vector<std::string>& lines, const std::string& metric);
// D_m,config,theta_m,score
std::string format_scores(const std::vector<ScoreSample>& scores);
std::vector<ScoreSample> parse_scores(const std::vector<std::string>& lines);

}  // namespace commsense
