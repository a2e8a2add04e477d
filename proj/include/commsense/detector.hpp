#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "commsense/campaign.hpp"

namespace commsense {

struct TrainOptions {
  double margin_param = 1e-2;  // regularization weight lambda
  int epochs = 200;
  std::uint64_t seed = 0;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double margin_param = 1e-2;
  int epochs = 0;
  std::uint64_t seed = 0;

  double decision(std::span<const double> feature) const;
};

using FeatureRows = std::vector<std::vector<double>>;

// Class-balanced soft-margin objective
//   lambda/2 |w|^2 + 1/2 mean_{y=+1} hinge + 1/2 mean_{y=-1} hinge
// with hinge = max(0, 1 - y (w.x + b)). Labels are +1 / -1.
double hinge_objective(std::span<const double> weights, double bias, const FeatureRows& features,
                       std::span<const int> labels, double margin_param);

// Pegasos-style projected stochastic subgradient descent: step 1/(lambda t),
// w kept inside the ball that must contain the optimum, one seeded shuffle
// per epoch. Examples are first put in a canonical order so the result does
// not depend on input order. At the end of each epoch the epoch-averaged
// iterate is scored on the full objective and the best checkpoint so far is
// kept; `objective_trace` receives the best objective after each epoch and
// is therefore non-increasing.
LinearModel train_linear(const FeatureRows& features, std::span<const int> labels, const TrainOptions& options,
                         std::vector<double>* objective_trace = nullptr);

// train_linear on z-scored features (per-column mean and population
// deviation of this training set; constant columns keep scale 1), with the
// result mapped back so the model applies to raw features.
LinearModel train_standardized(const FeatureRows& features, std::span<const int> labels,
                               const TrainOptions& options);

struct CascadeModel {
  LinearModel presence;  // object (+1) vs NONE (-1)
  LinearModel count;     // TWO (+1) vs ONE (-1)
};

struct Prediction {
  ObjectClass label = ObjectClass::None;
  double presence_score = 0.0;
  double count_score = 0.0;
};

CascadeModel train_cascade(const Dataset& train, const TrainOptions& options);

// A score of exactly zero counts as the positive side (object / TWO).
Prediction predict(const CascadeModel& model, std::span<const double> feature);

// Header line "L,margin_param,epochs,seed", then "w_0,...,w_{L-1},b" for
// the presence stage and for the count stage.
std::string format_model(const CascadeModel& model);
CascadeModel parse_model(const std::vector<std::string>& lines);
void save_model(const CascadeModel& model, const std::filesystem::path& path);
CascadeModel load_model(const std::filesystem::path& path);

}  // namespace commsense
