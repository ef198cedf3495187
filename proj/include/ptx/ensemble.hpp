#pragma once

#include "ptx/goe.hpp"
#include "ptx/histogram.hpp"
#include "ptx/reaction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ptx {

struct EnsembleConfig {
  ReservoirParams reservoir_a;
  ReservoirParams reservoir_b;
  ChannelParams channel;
  int n_runs = 50;
  int n_samples = 500;
  HistogramOptions histogram;
  std::uint64_t master_seed = 20220101;
  unsigned workers = 0;  // 0 = all cores

  void validate() const;
  // Sample k = run * n_samples + i uses substream k.
  std::uint64_t substream(int run, int sample) const {
    return static_cast<std::uint64_t>(run) * static_cast<std::uint64_t>(n_samples) +
           static_cast<std::uint64_t>(sample);
  }
};

struct PbSample {
  int run = 0;
  int sample = 0;
  bool excluded = false;  // degenerate denominator
  double p_b = 0.0;
  double branching_ratio = 0.0;
  double phi12 = 0.0;
  double phi34 = 0.0;
  Complex w23;
  double im_w22 = 0.0;
  double im_w44 = 0.0;
};

// Samples stay in (run, sample) order regardless of the worker count.
struct EnsembleResult {
  std::vector<PbSample> samples;
  HistogramSet histogram;
  std::int64_t excluded = 0;
};

inline constexpr double kMaxExcludedFraction = 0.01;

// One P_b sample from its own substream: draw, spectral self-energies, flux
// ratio. Returns an excluded record if the reduced denominator vanishes.
PbSample sample_pb(const EnsembleConfig& cfg, int run, int sample);

// n_runs x n_samples samples, histogrammed per run. Throws if more than 1% of
// the samples had to be excluded.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

// run_id,sample_id,p_b (excluded samples omitted).
std::string samples_csv(const EnsembleResult& result);
// sample_id,P_b,B_r,phi12,phi34,re_w23,im_w23,im_w22,im_w44
std::string records_csv(const EnsembleResult& result);

struct CrossoverPoint {
  double y = 0.0;  // rho0a Gamma_a
  double nu_hat = 0.0;
  double residual = 0.0;
};

struct ScanPoint {
  double gamma_a = 0.0;
  double t2 = 0.0;
  CrossoverPoint point;
  bool ok = false;
  std::string error;  // set when !ok
  HistogramSet histogram;
  FitResult fit;
  std::int64_t excluded = 0;
};

// Bridge hopping that keeps <P_b> roughly fixed as Gamma_a varies.
inline double scan_bridge_hopping(double gamma_a) { return -std::sqrt(10.0 * gamma_a); }

// For every Gamma_a: t2 = -(10 Gamma_a)^(1/2), run the ensemble, fit nu.
// A failing point is recorded and the scan continues.
std::vector<ScanPoint> nu_scan(const EnsembleConfig& base, const std::vector<double>& gamma_grid);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace ptx
