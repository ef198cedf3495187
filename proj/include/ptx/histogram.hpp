#pragma once

#include "ptx/porter_thomas.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace ptx {

struct HistogramOptions {
  int n_bins = 40;
  double x_max = 5.0;  // bins cover [0, x_max] in units of the pooled mean
};

// Per-run densities of x = value / <value>, where the mean is pooled over all
// runs. Each run's density integrates to 1 - overflow_fraction(run).
struct HistogramSet {
  Eigen::VectorXd edges;        // n_bins + 1
  Eigen::MatrixXd run_density;  // n_runs x n_bins
  Eigen::VectorXd mean_density;
  Eigen::VectorXd rms_density;  // population rms deviation across runs
  Eigen::VectorXd overflow_fraction;
  double pooled_mean = 0.0;
  std::int64_t total_samples = 0;
  std::int64_t excluded_samples = 0;

  Eigen::Index n_bins() const { return mean_density.size(); }
  Eigen::Index n_runs() const { return run_density.rows(); }
};

HistogramSet build_histogram(const std::vector<std::vector<double>>& runs, const HistogramOptions& options = {});

struct FitResult {
  double nu_hat = 0.0;
  double x0 = 1.0;
  double residual = 0.0;  // weighted sum of squares at nu_hat
  int n_bins = 0;         // bins entering the fit
};

inline constexpr double kNuLowerBound = 0.2;
inline constexpr double kNuUpperBound = 10.0;
inline constexpr double kNuTolerance = 1e-4;

// Weighted least squares of the bin-averaged PT density against the mean run
// density, weights 1/rms^2, x0 fixed at 1 (the pooled mean). Bins with zero
// rms are dropped; fewer than 5 usable bins is an error.
FitResult fit_nu(const HistogramSet& h);

// Bin average of the PT density, (cdf(hi) - cdf(lo)) / (hi - lo).
double pt_bin_average(double lo, double hi, const PtParams& p);

std::string histogram_csv(const HistogramSet& h);

}  // namespace ptx
