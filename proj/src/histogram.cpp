#include "ptx/histogram.hpp"

#include "ptx/csv.hpp"
#include "ptx/error.hpp"
#include "ptx/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ptx {

HistogramSet build_histogram(const std::vector<std::vector<double>>& runs, const HistogramOptions& options) {
  if (runs.empty()) {
    throw InsufficientData("build_histogram: no runs");
  }
  if (options.n_bins < 1 || !(options.x_max > 0.0)) {
    throw DomainError("build_histogram: need n_bins >= 1 and x_max > 0");
  }
  const auto n_runs = static_cast<Eigen::Index>(runs.size());
  const Eigen::Index n_bins = options.n_bins;

  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& run : runs) {
    if (run.empty()) {
      throw InsufficientData("build_histogram: empty run");
    }
    for (double x : run) {
      sum += x;
    }
    count += static_cast<std::int64_t>(run.size());
  }
  HistogramSet h;
  h.total_samples = count;
  h.pooled_mean = sum / static_cast<double>(count);
  if (!(h.pooled_mean > 0.0)) {
    throw InsufficientData("build_histogram: pooled mean must be positive");
  }

  const double width = options.x_max / static_cast<double>(n_bins);
  h.edges = Eigen::VectorXd::LinSpaced(n_bins + 1, 0.0, options.x_max);
  h.run_density = Eigen::MatrixXd::Zero(n_runs, n_bins);
  h.overflow_fraction = Eigen::VectorXd::Zero(n_runs);
  for (Eigen::Index r = 0; r < n_runs; ++r) {
    const auto& run = runs[static_cast<std::size_t>(r)];
    const auto n = static_cast<double>(run.size());
    for (double value : run) {
      const double x = value / h.pooled_mean;
      const auto bin = static_cast<Eigen::Index>(std::floor(x / width));
      if (bin >= 0 && bin < n_bins) {
        h.run_density(r, bin) += 1.0;
      } else {
        h.overflow_fraction(r) += 1.0;
      }
    }
    h.run_density.row(r) /= n * width;
    h.overflow_fraction(r) /= n;
  }
  h.mean_density = h.run_density.colwise().mean().transpose();
  h.rms_density =
      ((h.run_density.rowwise() - h.mean_density.transpose()).array().square().colwise().sum() /
       static_cast<double>(n_runs))
          .sqrt()
          .transpose();
  return h;
}

double pt_bin_average(double lo, double hi, const PtParams& p) {
  return (pt_cdf(hi, p) - pt_cdf(lo, p)) / (hi - lo);
}

FitResult fit_nu(const HistogramSet& h) {
  std::vector<Eigen::Index> used;
  for (Eigen::Index b = 0; b < h.n_bins(); ++b) {
    if (h.rms_density(b) > 0.0) {
      used.push_back(b);
    }
  }
  if (used.size() < 5) {
    throw InsufficientData("fit_nu: fewer than 5 bins with nonzero rms");
  }
  auto objective = [&](double nu) {
    const PtParams p{nu, 1.0};
    double sum = 0.0;
    for (Eigen::Index b : used) {
      const double model = pt_bin_average(h.edges(b), h.edges(b + 1), p);
      const double diff = h.mean_density(b) - model;
      sum += diff * diff / (h.rms_density(b) * h.rms_density(b));
    }
    return sum;
  };

  // Coarse log-spaced scan, then Brent inside the cell around the best node,
  // so a shallow secondary minimum cannot capture the search.
  constexpr int kScan = 60;
  const double log_lo = std::log(kNuLowerBound);
  const double log_hi = std::log(kNuUpperBound);
  std::vector<double> nodes(kScan + 1);
  int best = 0;
  double best_value = 0.0;
  for (int i = 0; i <= kScan; ++i) {
    nodes[i] = std::exp(log_lo + (log_hi - log_lo) * i / kScan);
    const double value = objective(nodes[i]);
    if (i == 0 || value < best_value) {
      best = i;
      best_value = value;
    }
  }
  const double lo = nodes[std::max(best - 1, 0)];
  const double hi = nodes[std::min(best + 1, kScan)];
  const MinimizeResult m = brent_minimize(objective, lo, hi, kNuTolerance);

  FitResult fit;
  if (m.value <= best_value) {
    fit.nu_hat = m.x;
    fit.residual = m.value;
  } else {
    fit.nu_hat = nodes[best];
    fit.residual = best_value;
  }
  fit.x0 = 1.0;
  fit.n_bins = static_cast<int>(used.size());
  return fit;
}

std::string histogram_csv(const HistogramSet& h) {
  std::string out = "bin_lo,bin_hi,density_mean,density_rms\n";
  for (Eigen::Index b = 0; b < h.n_bins(); ++b) {
    out += csv::join({csv::number(h.edges(b)), csv::number(h.edges(b + 1)), csv::number(h.mean_density(b)),
                      csv::number(h.rms_density(b))});
    out += '\n';
  }
  return out;
}

}  // namespace ptx
