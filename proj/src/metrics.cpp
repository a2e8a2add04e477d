#include "commsense/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "commsense/csv.hpp"
#include "commsense/errors.hpp"
#include "commsense/scene_channel.hpp"

namespace commsense {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  false_accepts += other.false_accepts;
  impostor_attempts += other.impostor_attempts;
  false_rejects += other.false_rejects;
  legitimate_attempts += other.legitimate_attempts;
  correct += other.correct;
  total += other.total;
  return *this;
}

double accuracy(const ConfusionCounts& counts) {
  if (counts.total == 0) throw DataError("accuracy is undefined with zero attempts");
  return static_cast<double>(counts.correct) / static_cast<double>(counts.total);
}

double far(const ConfusionCounts& counts) {
  if (counts.impostor_attempts == 0) throw DataError("FAR is undefined with zero impostor attempts");
  return static_cast<double>(counts.false_accepts) / static_cast<double>(counts.impostor_attempts);
}

double frr(const ConfusionCounts& counts) {
  if (counts.legitimate_attempts == 0) throw DataError("FRR is undefined with zero legitimate attempts");
  return static_cast<double>(counts.false_rejects) / static_cast<double>(counts.legitimate_attempts);
}

ConfusionCounts tally(const std::vector<Decision>& decisions) {
  ConfusionCounts c;
  for (const auto& d : decisions) {
    if (d.genuine) {
      ++c.legitimate_attempts;
      if (!d.accepted) ++c.false_rejects;
    } else {
      ++c.impostor_attempts;
      if (d.accepted) ++c.false_accepts;
    }
    if (d.right) ++c.correct;
    ++c.total;
  }
  return c;
}

std::vector<MetricCurve> Evaluation::curves(const std::string& metric) const {
  std::map<double, MetricCurve> by_distance;
  for (const auto& row : rows) {
    auto& curve = by_distance[row.distance];
    curve.distance = row.distance;
    curve.metric = metric;
    curve.thetas.push_back(row.theta);
    if (metric == "accuracy") {
      curve.values.push_back(accuracy(row.counts));
    } else if (metric == "far") {
      curve.values.push_back(far(row.counts));
    } else if (metric == "frr") {
      curve.values.push_back(frr(row.counts));
    } else {
      throw DataError(fmt::format("unknown metric '{}'", metric));
    }
  }
  std::vector<MetricCurve> out;
  for (auto& [d, curve] : by_distance) out.push_back(std::move(curve));
  return out;
}

Evaluation score_predictions(const CascadeModel& model, const Dataset& test) {
  if (test.empty()) throw DataError("cannot evaluate an empty dataset");

  Evaluation ev;
  ev.records = test.size();
  std::vector<Decision> presence;
  std::vector<Decision> count;
  // Per distance: count-framing decisions on ONE readings; per (D, x): on TWO readings.
  std::map<double, std::vector<Decision>> impostors;
  std::map<std::pair<double, double>, std::vector<Decision>> legitimates;
  std::map<std::pair<double, double>, std::vector<double>> two_scores;

  for (const auto& r : test.records) {
    const auto p = predict(model, r.taps);
    const bool right = p.label == r.label;
    if (right) ++ev.cascade_correct;
    auto& stratum = ev.strata[{static_cast<int>(r.label), r.distance, r.fraction}];
    ++stratum.records;
    if (right) ++stratum.correct;

    const bool object = r.label != ObjectClass::None;
    const bool detected = p.label != ObjectClass::None;
    presence.push_back({object, detected, object == detected});

    // ONE and TWO readings go straight to the count stage, whatever the
    // presence stage said.
    const bool says_two = p.count_score >= 0.0;
    if (r.label == ObjectClass::One) {
      const Decision d{false, says_two, !says_two};
      count.push_back(d);
      impostors[r.distance].push_back(d);
    } else if (r.label == ObjectClass::Two) {
      const Decision d{true, says_two, says_two};
      count.push_back(d);
      legitimates[{r.distance, r.fraction}].push_back(d);
      two_scores[{r.distance, r.fraction}].push_back(p.count_score);
    }
  }
  ev.presence = tally(presence);
  ev.count = tally(count);

  std::set<double> distances_with_two;
  int config = 0;
  double current = -1.0;
  for (const auto& [key, decisions] : legitimates) {
    const auto [distance, fraction] = key;
    distances_with_two.insert(distance);
    config = distance == current ? config + 1 : 0;
    current = distance;
    const double theta = intra_reflector_distance(distance, fraction).chord;
    for (double s : two_scores[key]) ev.scores.push_back({distance, config, theta, s});

    const auto it = impostors.find(distance);
    if (it == impostors.end()) {
      ev.warnings.push_back(fmt::format("skipped stratum D={} x={}: no ONE readings at this distance", distance,
                                        fraction));
      continue;
    }
    std::vector<Decision> all = it->second;
    all.insert(all.end(), decisions.begin(), decisions.end());
    ev.rows.push_back({distance, fraction, theta, tally(all)});
  }
  for (const auto& [distance, decisions] : impostors) {
    if (!distances_with_two.contains(distance)) {
      ev.warnings.push_back(fmt::format("no TWO readings at D={}; its ONE readings enter no curve", distance));
    }
  }
  return ev;
}

std::string format_metrics(const std::vector<MetricRow>& rows) {
  std::string out = "D_m,theta_m,accuracy,far,frr\n";
  for (const auto& row : rows) {
    out += fmt::format("{},{},{},{},{}\n", csv::format_double(row.distance), csv::format_double(row.theta),
                       csv::format_double(accuracy(row.counts)), csv::format_double(far(row.counts)),
                       csv::format_double(frr(row.counts)));
  }
  return out;
}

std::vector<MetricCurve> parse_metric_curves(const std::vector<std::string>& lines, const std::string& metric) {
  static const std::vector<std::string> kColumns{"D_m", "theta_m", "accuracy", "far", "frr"};
  if (lines.empty() || lines.front() != "D_m,theta_m,accuracy,far,frr") {
    throw DataError("line 1: expected header 'D_m,theta_m,accuracy,far,frr'");
  }
  const auto column = std::find(kColumns.begin(), kColumns.end(), metric);
  if (column == kColumns.end() || column - kColumns.begin() < 2) {
    throw DataError(fmt::format("unknown metric '{}'", metric));
  }
  const auto index = static_cast<std::size_t>(column - kColumns.begin());

  std::map<double, std::vector<std::pair<double, double>>> points;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = csv::split(lines[n]);
    if (fields.size() != kColumns.size()) {
      throw DataError(fmt::format("line {}: expected {} fields, got {}", n + 1, kColumns.size(), fields.size()));
    }
    try {
      const double d = csv::parse_double(fields[0], "D_m");
      points[d].emplace_back(csv::parse_double(fields[1], "theta_m"), csv::parse_double(fields[index], metric));
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", n + 1, e.what()));
    }
  }

  std::vector<MetricCurve> curves;
  for (auto& [d, pts] : points) {
    std::sort(pts.begin(), pts.end());
    MetricCurve curve{d, metric, {}, {}};
    for (const auto& [theta, value] : pts) {
      if (!curve.thetas.empty() && theta <= curve.thetas.back()) {
        throw DataError(fmt::format("duplicate theta {} at D={}", theta, d));
      }
      curve.thetas.push_back(theta);
      curve.values.push_back(value);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string format_scores(const std::vector<ScoreSample>& scores) {
  std::string out = "D_m,config,theta_m,score\n";
  for (const auto& s : scores) {
    out += fmt::format("{},{},{},{}\n", csv::format_double(s.distance), s.config, csv::format_double(s.theta),
                       csv::format_double(s.score));
  }
  return out;
}

std::vector<ScoreSample> parse_scores(const std::vector<std::string>& lines) {
  if (lines.empty() || lines.front() != "D_m,config,theta_m,score") {
    throw DataError("line 1: expected header 'D_m,config,theta_m,score'");
  }
  std::vector<ScoreSample> scores;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = csv::split(lines[n]);
    if (fields.size() != 4) throw DataError(fmt::format("line {}: expected 4 fields, got {}", n + 1, fields.size()));
    try {
      scores.push_back({csv::parse_double(fields[0], "D_m"), static_cast<int>(csv::parse_int(fields[1], "config")),
                        csv::parse_double(fields[2], "theta_m"), csv::parse_double(fields[3], "score")});
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", n + 1, e.what()));
    }
  }
  return scores;
}

}  // namespace commsense
