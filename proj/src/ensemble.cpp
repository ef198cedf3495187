#include "ptx/ensemble.hpp"

#include "ptx/csv.hpp"
#include "ptx/error.hpp"
#include "ptx/parallel.hpp"

#include <cmath>

namespace ptx {

void EnsembleConfig::validate() const {
  reservoir_a.validate("reservoir a");
  reservoir_b.validate("reservoir b");
  channel.validate();
  if (n_runs < 2) {
    throw DomainError("ensemble: n_runs must be at least 2");
  }
  if (n_samples < 10) {
    throw DomainError("ensemble: n_samples must be at least 10");
  }
  if (histogram.n_bins < 5) {
    throw DomainError("ensemble: n_bins must be at least 5");
  }
  if (!(histogram.x_max > 0.0)) {
    throw DomainError("ensemble: histogram range must be positive");
  }
}

PbSample sample_pb(const EnsembleConfig& cfg, int run, int sample) {
  RandomStream stream(cfg.master_seed, cfg.substream(run, sample));
  const ReactionDraw draw = draw_reaction(cfg.reservoir_a, cfg.reservoir_b, cfg.channel, stream);
  const SelfEnergySet w = spectral_self_energies(draw, cfg.reservoir_a, cfg.reservoir_b, cfg.channel);
  PbSample s;
  s.run = run;
  s.sample = sample;
  s.w23 = w.w23;
  s.im_w22 = w.w22.imag();
  s.im_w44 = w.w44.imag();
  try {
    const ReactionResult r = evaluate_reaction(w, cfg.channel);
    s.p_b = r.p_b;
    s.branching_ratio = r.branching_ratio;
    s.phi12 = r.phi12;
    s.phi34 = r.phi34;
  } catch (const DegenerateDenominator&) {
    s.excluded = true;
  }
  return s;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  const auto total = static_cast<std::size_t>(cfg.n_runs) * static_cast<std::size_t>(cfg.n_samples);
  EnsembleResult result;
  result.samples.resize(total);
  parallel_for(total, cfg.workers, [&](std::size_t k) {
    const int run = static_cast<int>(k / static_cast<std::size_t>(cfg.n_samples));
    const int sample = static_cast<int>(k % static_cast<std::size_t>(cfg.n_samples));
    result.samples[k] = sample_pb(cfg, run, sample);
  });

  std::vector<std::vector<double>> runs(static_cast<std::size_t>(cfg.n_runs));
  for (const PbSample& s : result.samples) {
    if (s.excluded) {
      ++result.excluded;
    } else {
      runs[static_cast<std::size_t>(s.run)].push_back(s.p_b);
    }
  }
  if (static_cast<double>(result.excluded) > kMaxExcludedFraction * static_cast<double>(total)) {
    throw DegenerateDenominator("run_ensemble: " + std::to_string(result.excluded) + " of " +
                                std::to_string(total) + " samples had a degenerate denominator (limit 1%)");
  }
  result.histogram = build_histogram(runs, cfg.histogram);
  result.histogram.excluded_samples = result.excluded;
  return result;
}

std::string samples_csv(const EnsembleResult& result) {
  std::string out = "run_id,sample_id,p_b\n";
  for (const PbSample& s : result.samples) {
    if (s.excluded) {
      continue;
    }
    out += csv::join({std::to_string(s.run), std::to_string(s.sample), csv::number(s.p_b)});
    out += '\n';
  }
  return out;
}

std::string records_csv(const EnsembleResult& result) {
  std::string out = "sample_id,P_b,B_r,phi12,phi34,re_w23,im_w23,im_w22,im_w44\n";
  std::size_t id = 0;
  for (const PbSample& s : result.samples) {
    const std::size_t sample_id = id++;
    if (s.excluded) {
      continue;
    }
    using csv::number;
    out += csv::join({std::to_string(sample_id), number(s.p_b), number(s.branching_ratio), number(s.phi12),
                      number(s.phi34), number(s.w23.real()), number(s.w23.imag()), number(s.im_w22),
                      number(s.im_w44)});
    out += '\n';
  }
  return out;
}

std::vector<ScanPoint> nu_scan(const EnsembleConfig& base, const std::vector<double>& gamma_grid) {
  for (double g : gamma_grid) {
    if (!(g > 0.0)) {
      throw DomainError("nu_scan: every grid value must be positive");
    }
  }
  std::vector<ScanPoint> points;
  points.reserve(gamma_grid.size());
  for (double gamma_a : gamma_grid) {
    ScanPoint p;
    p.gamma_a = gamma_a;
    p.t2 = scan_bridge_hopping(gamma_a);
    EnsembleConfig cfg = base;
    cfg.reservoir_a.gamma = gamma_a;
    cfg.channel.t2 = p.t2;
    p.point.y = cfg.reservoir_a.level_density() * gamma_a;
    try {
      EnsembleResult r = run_ensemble(cfg);
      p.fit = fit_nu(r.histogram);
      p.histogram = std::move(r.histogram);
      p.excluded = r.excluded;
      p.point.nu_hat = p.fit.nu_hat;
      p.point.residual = p.fit.residual;
      p.ok = true;
    } catch (const Error& e) {
      p.ok = false;
      p.error = e.what();
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
    throw DomainError("log_grid: need 0 < lo <= hi and at least one point");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  }
  grid.back() = hi;
  return grid;
}

}  // namespace ptx
