#include "commsense/resolution.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>

#include "commsense/csv.hpp"
#include "commsense/errors.hpp"

namespace commsense {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct Cell {
  int config = 0;
  double theta = 0.0;
  std::vector<double> samples;
};

}  // namespace

double np_resolution(const MetricCurve& far_curve, double epsilon) {
  const auto& th = far_curve.thetas;
  const auto& v = far_curve.values;
  if (th.size() != v.size()) throw DataError("curve theta and value counts differ");
  if (th.size() < 2) throw DataError(fmt::format("NP resolution needs at least 2 grid points at D={}", far_curve.distance));
  if (!(epsilon > 0.0)) throw DataError("epsilon must be positive");
  for (std::size_t i = 1; i < th.size(); ++i) {
    if (!(th[i] > th[i - 1])) throw DataError("curve thetas must be strictly increasing");
  }

  std::size_t last = 0;
  while (last + 1 < th.size() && std::abs(v[last + 1] - v[last]) <= epsilon) ++last;
  return th[last] - th[0];
}

GaussianFit gaussian_fit(std::span<const double> samples) {
  const auto n = samples.size();
  if (n < 2) throw DataError("a Gaussian fit needs at least 2 samples");
  GaussianFit fit;
  double sum = 0.0;
  for (double s : samples) sum += s;
  fit.mu = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - fit.mu) * (s - fit.mu);
  fit.sigma = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(fit.sigma > 0.0) || !std::isfinite(fit.sigma)) throw DataError("samples have zero variance");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = normal_cdf((sorted[i] - fit.mu) / fit.sigma);
    ks = std::max({ks, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  fit.ks_statistic = ks;
  fit.ks_threshold = 1.36 / std::sqrt(static_cast<double>(n));
  fit.gaussian = ks < fit.ks_threshold;
  return fit;
}

double fisher_information(std::span<const double> samples, double mu, double sigma) {
  if (!(sigma > 0.0)) throw DataError("sigma must be positive");
  if (samples.empty()) throw DataError("Fisher information needs samples");
  const double var = sigma * sigma;
  double sum = 0.0;
  for (double s : samples) {
    const double score = (mu - s) / var;
    sum += score * score;
  }
  return sum / static_cast<double>(samples.size());
}

double kde_fisher_information(std::span<const double> samples) {
  const auto fit = gaussian_fit(samples);
  const auto n = static_cast<double>(samples.size());
  const double bandwidth = 1.06 * fit.sigma * std::pow(n, -0.2);
  const double h = 1e-3 * bandwidth;

  auto log_density = [&](double at) {
    double sum = 0.0;
    for (double s : samples) {
      const double z = (at - s) / bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    return std::log(sum);  // constant factors drop out of the derivative
  };

  double total = 0.0;
  for (double s : samples) {
    const double score = (log_density(s + h) - log_density(s - h)) / (2.0 * h);
    total += score * score;
  }
  return total / n;
}

ResolutionCurve np_resolution_curve(const std::vector<MetricCurve>& far_curves, double epsilon) {
  ResolutionCurve curve{"NP", epsilon, {}};
  for (const auto& c : far_curves) {
    curve.points.push_back({c.distance, np_resolution(c, epsilon), c.thetas.size(), 0, 0.0});
  }
  return curve;
}

ResolutionCurve crlb_resolution(const std::vector<ScoreSample>& samples, double epsilon) {
  std::map<double, std::map<int, Cell>> grid;
  for (const auto& s : samples) {
    auto& cell = grid[s.distance][s.config];
    if (cell.samples.empty()) {
      cell.config = s.config;
      cell.theta = s.theta;
    } else if (cell.theta != s.theta) {
      throw DataError(fmt::format("cell (D={}, config {}) has inconsistent theta values", s.distance, s.config));
    }
    cell.samples.push_back(s.score);
  }
  if (grid.empty()) throw DataError("no score samples");

  ResolutionCurve curve{"CR", epsilon, {}};
  for (auto& [distance, by_config] : grid) {
    std::vector<Cell> cells;
    for (auto& [config, cell] : by_config) cells.push_back(std::move(cell));
    if (cells.size() < 2) {
      throw DataError(fmt::format("CR resolution needs at least 2 theta cells at D={}", distance));
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.theta < b.theta; });

    ResolutionPoint point{distance, 0.0, cells.size(), 0, 0.0};
    std::vector<double> variance;
    for (const auto& cell : cells) {
      if (cell.samples.size() < 2) {
        throw DataError(fmt::format("cell (D={}, theta={}) needs at least 2 samples", distance, cell.theta));
      }
      const auto fit = gaussian_fit(cell.samples);
      double information = 0.0;
      if (fit.gaussian) {
        information = fisher_information(cell.samples, fit.mu, fit.sigma);
      } else {
        information = kde_fisher_information(cell.samples);
        ++point.kde_cells;
      }
      variance.push_back(1.0 / information);
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const double change = std::abs(variance[j] - variance[j - 1]);
      if (change < best) {
        best = change;
        point.resolution = cells[j].theta - cells[j - 1].theta;
      }
    }
    point.variance_change = best;
    curve.points.push_back(point);
  }
  return curve;
}

double max_grid_step(std::span<const double> thetas) {
  double step = 0.0;
  for (std::size_t i = 1; i < thetas.size(); ++i) step = std::max(step, thetas[i] - thetas[i - 1]);
  return step;
}

std::string format_resolution(const std::vector<ResolutionCurve>& curves) {
  std::string out = "method,D_m,resolution_m,epsilon\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += fmt::format("{},{},{},{}\n", c.method, csv::format_double(p.distance), csv::format_double(p.resolution),
                         csv::format_double(c.epsilon));
    }
  }
  return out;
}

std::string format_resolution_meta(const std::vector<ResolutionCurve>& curves) {
  std::string out = "method,D_m,cells,kde_cells,variance_change\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += fmt::format("{},{},{},{},{}\n", c.method, csv::format_double(p.distance), p.cells, p.kde_cells,
                         csv::format_double(p.variance_change));
    }
  }
  return out;
}

}  // namespace commsense
