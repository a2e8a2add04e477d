#pragma once

#include <span>
#include <string>
#include <vector>

#include "commsense/metrics.hpp"

namespace commsense {

// Extent of the initial flat stretch of a FAR curve: scanning upward from
// the first grid point, the largest theta_k - theta_0 such that every step
// up to k changes FAR by at most epsilon. Zero when the first step already
// breaks the bound; the full grid span when no step does.
double np_resolution(const MetricCurve& far_curve, double epsilon);

struct GaussianFit {
  double mu = 0.0;
  double sigma = 0.0;           // unbiased sample standard deviation
  double ks_statistic = 0.0;    // against N(mu, sigma)
  double ks_threshold = 0.0;    // 1.36 / sqrt(n), the 5% critical value
  bool gaussian = false;        // ks_statistic < ks_threshold
};

// Needs at least two samples with non-zero spread.
GaussianFit gaussian_fit(std::span<const double> samples);

// Mean squared score of the Gaussian location model, ((mu - s) / sigma^2)^2,
// over the samples. Tends to 1 / sigma^2 on Gaussian data.
double fisher_information(std::span<const double> samples, double mu, double sigma);

// Location Fisher information of a Gaussian kernel density estimate
// (Silverman bandwidth), with the log-density derivative taken by central
// differences at every sample. Used when the Gaussian fit is rejected.
double kde_fisher_information(std::span<const double> samples);

struct ResolutionPoint {
  double distance = 0.0;
  double resolution = 0.0;
  std::size_t cells = 0;
  std::size_t kde_cells = 0;        // cells that failed the normality test
  double variance_change = 0.0;     // CR only: |dVar| of the selected step
};

struct ResolutionCurve {
  std::string method;  // "NP" or "CR"
  double epsilon = 0.0;
  std::vector<ResolutionPoint> points;
};

ResolutionCurve np_resolution_curve(const std::vector<MetricCurve>& far_curves, double epsilon);

// For each distance: fit every (theta, config) cell, turn it into an
// estimate variance 1 / I, walk consecutive cells in theta order and return
// the theta step whose variance change is smallest (first one on ties).
ResolutionCurve crlb_resolution(const std::vector<ScoreSample>& samples, double epsilon = 0.0);

// Largest consecutive spacing of a sorted theta grid.
double max_grid_step(std::span<const double> thetas);

// method,D_m,resolution_m,epsilon
std::string format_resolution(const std::vector<ResolutionCurve>& curves);
// method,D_m,cells,kde_cells,variance_change
std::string format_resolution_meta(const std::vector<ResolutionCurve>& curves);

}  // namespace commsense
