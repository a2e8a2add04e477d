#include "commsense/detector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "commsense/csv.hpp"
#include "commsense/errors.hpp"

namespace commsense {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void check_training_set(const FeatureRows& features, std::span<const int> labels, const TrainOptions& options) {
  if (features.size() != labels.size()) throw DataError("feature and label counts differ");
  if (features.empty()) throw DataError("empty training set");
  const auto dim = features.front().size();
  if (dim == 0) throw DataError("features must be non-empty");
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != dim) throw DataError("features have inconsistent lengths");
    for (double v : features[i]) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value");
    }
    if (labels[i] == 1) {
      pos = true;
    } else if (labels[i] == -1) {
      neg = true;
    } else {
      throw DataError(fmt::format("labels must be +1 or -1, got {}", labels[i]));
    }
  }
  if (!pos || !neg) throw DataError("training set needs at least one example of each label");
  if (!(options.margin_param > 0.0)) throw DataError("margin_param must be positive");
  if (options.epochs < 1) throw DataError("epochs must be at least 1");
}

std::string format_stage(const LinearModel& m) {
  std::string line;
  for (double w : m.weights) {
    line += csv::format_double(w);
    line += ',';
  }
  line += csv::format_double(m.bias);
  line += '\n';
  return line;
}

}  // namespace

double LinearModel::decision(std::span<const double> feature) const {
  if (feature.size() != weights.size()) {
    throw DataError(fmt::format("feature length {} does not match model length {}", feature.size(), weights.size()));
  }
  return dot(weights, feature) + bias;
}

double hinge_objective(std::span<const double> weights, double bias, const FeatureRows& features,
                       std::span<const int> labels, double margin_param) {
  double loss_pos = 0.0;
  double loss_neg = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double hinge = std::max(0.0, 1.0 - labels[i] * (dot(weights, features[i]) + bias));
    if (labels[i] > 0) {
      loss_pos += hinge;
      ++n_pos;
    } else {
      loss_neg += hinge;
      ++n_neg;
    }
  }
  double objective = 0.5 * margin_param * dot(weights, weights);
  if (n_pos > 0) objective += 0.5 * loss_pos / static_cast<double>(n_pos);
  if (n_neg > 0) objective += 0.5 * loss_neg / static_cast<double>(n_neg);
  return objective;
}

LinearModel train_linear(const FeatureRows& features, std::span<const int> labels, const TrainOptions& options,
                         std::vector<double>* objective_trace) {
  check_training_set(features, labels, options);
  const std::size_t n = features.size();
  const std::size_t dim = features.front().size();
  const double lambda = options.margin_param;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (features[a] != features[b]) return features[a] < features[b];
    return labels[a] < labels[b];
  });

  const auto n_pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const auto n_neg = static_cast<double>(n) - n_pos;
  const double weight_pos = static_cast<double>(n) / (2.0 * n_pos);
  const double weight_neg = static_cast<double>(n) / (2.0 * n_neg);

  // The optimum satisfies lambda/2 |w|^2 <= J(0, 0) = 1. Beyond
  // |b| = radius * max|x| + 1 every example sits on one side, so the bias
  // box also contains the optimum.
  const double radius = std::sqrt(2.0 / lambda);
  double max_norm = 0.0;
  for (const auto& x : features) max_norm = std::max(max_norm, std::sqrt(dot(x, x)));
  const double bias_bound = radius * max_norm + 1.0;

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  LinearModel best{w, b, lambda, options.epochs, options.seed};
  double best_objective = hinge_objective(w, b, features, labels, lambda);

  std::mt19937_64 rng(options.seed);
  std::vector<double> avg_w(dim);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(avg_w.begin(), avg_w.end(), 0.0);
    double avg_b = 0.0;

    for (const std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto& x = features[i];
      const int y = labels[i];
      const double margin = y * (dot(w, x) + b);
      const double shrink = 1.0 - eta * lambda;
      for (auto& v : w) v *= shrink;
      if (margin < 1.0) {
        const double step = eta * (y > 0 ? weight_pos : weight_neg) * y;
        for (std::size_t j = 0; j < dim; ++j) w[j] += step * x[j];
        b += step;
      }
      const double norm = std::sqrt(dot(w, w));
      if (norm > radius) {
        for (auto& v : w) v *= radius / norm;
      }
      b = std::clamp(b, -bias_bound, bias_bound);

      for (std::size_t j = 0; j < dim; ++j) avg_w[j] += w[j];
      avg_b += b;
    }

    for (auto& v : avg_w) v /= static_cast<double>(n);
    avg_b /= static_cast<double>(n);
    const double objective = hinge_objective(avg_w, avg_b, features, labels, lambda);
    if (objective < best_objective) {
      best_objective = objective;
      best.weights = avg_w;
      best.bias = avg_b;
    }
    if (objective_trace) objective_trace->push_back(best_objective);
  }
  return best;
}

LinearModel train_standardized(const FeatureRows& features, std::span<const int> labels, const TrainOptions& options) {
  check_training_set(features, labels, options);
  const std::size_t n = features.size();
  const std::size_t dim = features.front().size();
  std::vector<double> mean(dim, 0.0);
  std::vector<double> scale(dim, 0.0);
  for (const auto& x : features) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += x[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (const auto& x : features) {
    for (std::size_t j = 0; j < dim; ++j) scale[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
  }
  for (auto& s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;
  }

  FeatureRows z(n, std::vector<double>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) z[i][j] = (features[i][j] - mean[j]) / scale[j];
  }
  auto model = train_linear(z, labels, options);
  for (std::size_t j = 0; j < dim; ++j) {
    model.weights[j] /= scale[j];
    model.bias -= model.weights[j] * mean[j];
  }
  return model;
}

CascadeModel train_cascade(const Dataset& train, const TrainOptions& options) {
  bool has[3] = {false, false, false};
  for (const auto& r : train.records) has[static_cast<int>(r.label)] = true;
  for (int c = 0; c < 3; ++c) {
    if (!has[c]) {
      throw DataError(fmt::format("training data has no {} records", to_string(static_cast<ObjectClass>(c))));
    }
  }

  FeatureRows presence_x;
  std::vector<int> presence_y;
  FeatureRows count_x;
  std::vector<int> count_y;
  presence_x.reserve(train.size());
  presence_y.reserve(train.size());
  for (const auto& r : train.records) {
    presence_x.push_back(r.taps);
    presence_y.push_back(r.label == ObjectClass::None ? -1 : 1);
    if (r.label != ObjectClass::None) {
      count_x.push_back(r.taps);
      count_y.push_back(r.label == ObjectClass::Two ? 1 : -1);
    }
  }
  return {train_standardized(presence_x, presence_y, options), train_standardized(count_x, count_y, options)};
}

Prediction predict(const CascadeModel& model, std::span<const double> feature) {
  Prediction p;
  p.presence_score = model.presence.decision(feature);
  p.count_score = model.count.decision(feature);
  if (p.presence_score < 0.0) {
    p.label = ObjectClass::None;
  } else {
    p.label = p.count_score < 0.0 ? ObjectClass::One : ObjectClass::Two;
  }
  return p;
}

std::string format_model(const CascadeModel& model) {
  const auto& m = model.presence;
  std::string out = fmt::format("{},{},{},{}\n", m.weights.size(), csv::format_double(m.margin_param), m.epochs,
                                m.seed);
  out += format_stage(model.presence);
  out += format_stage(model.count);
  return out;
}

CascadeModel parse_model(const std::vector<std::string>& lines) {
  std::vector<std::string> content;
  for (const auto& l : lines) {
    if (!l.empty()) content.push_back(l);
  }
  if (content.size() != 3) {
    throw DataError(fmt::format("model file must have 3 lines (header and two stages), got {}", content.size()));
  }
  const auto header = csv::split(content[0]);
  if (header.size() != 4) throw DataError("line 1: expected 'L,margin_param,epochs,seed'");
  const auto dim = csv::parse_uint(header[0], "L");
  LinearModel proto;
  proto.margin_param = csv::parse_double(header[1], "margin_param");
  proto.epochs = static_cast<int>(csv::parse_int(header[2], "epochs"));
  proto.seed = csv::parse_uint(header[3], "seed");
  if (dim == 0) throw DataError("line 1: L must be positive");

  auto stage = [&](std::size_t line) {
    const auto fields = csv::split(content[line]);
    if (fields.size() != dim + 1) {
      throw DataError(fmt::format("line {}: expected {} values, got {}", line + 1, dim + 1, fields.size()));
    }
    LinearModel m = proto;
    m.weights.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) m.weights[i] = csv::parse_double(fields[i], "weight");
    m.bias = csv::parse_double(fields[dim], "bias");
    for (double v : m.weights) {
      if (!std::isfinite(v)) throw DataError(fmt::format("line {}: non-finite weight", line + 1));
    }
    if (!std::isfinite(m.bias)) throw DataError(fmt::format("line {}: non-finite bias", line + 1));
    return m;
  };
  return {stage(1), stage(2)};
}

void save_model(const CascadeModel& model, const std::filesystem::path& path) {
  csv::write_file(path, format_model(model));
}

CascadeModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(csv::read_lines(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace commsense
