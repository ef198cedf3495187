#include "ptx/experiment.hpp"

#include "ptx/csv.hpp"
#include "ptx/error.hpp"
#include "ptx/porter_thomas.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace ptx {

namespace {

using csv::number;

class OutputWriter {
 public:
  OutputWriter(const ExperimentConfig& cfg, RunManifest& manifest)
      : dir_(cfg.out_dir), hash_(manifest.config_hash), manifest_(manifest) {}

  void write(const std::string& name, const std::string& body) {
    write_raw(name, "# config_hash=" + hash_ + "\n" + body);
  }

  void write_raw(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      throw Error("cannot write " + (dir_ / name).string());
    }
    if (name != "manifest.json") {
      manifest_.outputs.push_back(name);
    }
  }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  RunManifest& manifest_;
};

void record_ensemble_substreams(const EnsembleConfig& e, RunManifest& m) {
  for (int run = 0; run < e.n_runs; ++run) {
    m.substreams.push_back({fmt::format("run {}", run), e.substream(run, 0), static_cast<std::uint64_t>(e.n_samples)});
  }
}

std::string fit_report(const FitResult& fit, const HistogramSet& h, double nu_eff_value) {
  std::string out;
  out += fmt::format("nu_hat = {}\n", number(fit.nu_hat));
  out += fmt::format("x0 = {}\n", number(fit.x0));
  out += fmt::format("residual = {}\n", number(fit.residual));
  out += fmt::format("n_bins = {}\n", fit.n_bins);
  out += fmt::format("n_samples = {}\n", h.total_samples);
  out += fmt::format("n_excluded = {}\n", h.excluded_samples);
  out += fmt::format("pooled_mean = {}\n", number(h.pooled_mean));
  out += fmt::format("nu_eff = {}\n", number(nu_eff_value));
  return out;
}

// Histogram columns plus the bin-averaged PT density at the fitted nu.
std::string histogram_with_fit_csv(const HistogramSet& h, const FitResult& fit) {
  std::string out = "bin_lo,bin_hi,density_mean,density_rms,pt_fit\n";
  const PtParams p{fit.nu_hat, fit.x0};
  for (Eigen::Index b = 0; b < h.n_bins(); ++b) {
    out += csv::join({number(h.edges(b)), number(h.edges(b + 1)), number(h.mean_density(b)),
                      number(h.rms_density(b)), number(pt_bin_average(h.edges(b), h.edges(b + 1), p))});
    out += '\n';
  }
  return out;
}

std::string overlay_csv(const HistogramOptions& opts, const FitResult& fit) {
  std::string out = "x,pdf_nu1,pdf_nu2,pdf_fit\n";
  constexpr int kPoints = 500;
  for (int i = 1; i <= kPoints; ++i) {
    const double x = opts.x_max * i / kPoints;
    out += csv::join({number(x), number(pt_pdf(x, {1.0, 1.0})), number(pt_pdf(x, {2.0, 1.0})),
                      number(pt_pdf(x, {fit.nu_hat, fit.x0}))});
    out += '\n';
  }
  return out;
}

double samples_nu_eff(const EnsembleResult& r) {
  std::vector<double> values;
  values.reserve(r.samples.size());
  for (const PbSample& s : r.samples) {
    if (!s.excluded) {
      values.push_back(s.p_b);
    }
  }
  try {
    return nu_eff(values);
  } catch (const InsufficientData&) {
    return std::nan("");
  }
}

void run_single(const ExperimentConfig& cfg, const std::string& prefix, RunManifest& m, OutputWriter& out) {
  record_ensemble_substreams(cfg.ensemble, m);
  const EnsembleResult r = run_ensemble(cfg.ensemble);
  m.excluded_samples = r.excluded;
  const FitResult fit = fit_nu(r.histogram);
  out.write(prefix + "_samples.csv", samples_csv(r));
  out.write(prefix + "_records.csv", records_csv(r));
  out.write(prefix + "_histogram.csv", histogram_with_fit_csv(r.histogram, fit));
  out.write(prefix + "_overlay.csv", overlay_csv(cfg.ensemble.histogram, fit));
  out.write(prefix + "_fit.txt", fit_report(fit, r.histogram, samples_nu_eff(r)));
  if (cfg.experiment == Experiment::fig1) {
    m.checks.push_back(check_fig1(r.histogram, fit));
  }
}

std::string scan_csv(const std::vector<ScanPoint>& scan) {
  std::string out = "y,gamma_a,t2,nu_hat,residual,nu_empirical,n_bins,n_excluded,status\n";
  for (const ScanPoint& p : scan) {
    out += csv::join({number(p.point.y), number(p.gamma_a), number(p.t2), p.ok ? number(p.point.nu_hat) : "nan",
                      p.ok ? number(p.point.residual) : "nan", number(crossover_curve(p.point.y)),
                      std::to_string(p.fit.n_bins), std::to_string(p.excluded), p.ok ? "ok" : "failed"});
    out += '\n';
  }
  return out;
}

std::string curve_csv(const std::vector<ScanPoint>& scan) {
  double lo = scan.front().point.y;
  double hi = scan.front().point.y;
  for (const ScanPoint& p : scan) {
    lo = std::min(lo, p.point.y);
    hi = std::max(hi, p.point.y);
  }
  std::string out = "y,nu_empirical\n";
  for (double y : log_grid(lo / 2.0, hi * 2.0, 200)) {
    out += csv::join({number(y), number(crossover_curve(y))});
    out += '\n';
  }
  return out;
}

void run_scan(const ExperimentConfig& cfg, RunManifest& m, OutputWriter& out) {
  record_ensemble_substreams(cfg.ensemble, m);
  const std::vector<ScanPoint> scan = nu_scan(cfg.ensemble, cfg.gamma_grid);
  for (const ScanPoint& p : scan) {
    m.excluded_samples += p.excluded;
  }
  const std::string prefix = to_string(cfg.experiment);
  out.write(prefix + "_scan.csv", scan_csv(scan));
  if (cfg.experiment == Experiment::fig2) {
    for (std::size_t i = 0; i < scan.size(); ++i) {
      if (scan[i].ok) {
        out.write(fmt::format("fig2_point{}_histogram.csv", i), histogram_with_fit_csv(scan[i].histogram, scan[i].fit));
      }
    }
    auto checks = check_small_width(scan);
    m.checks.insert(m.checks.end(), checks.begin(), checks.end());
  } else {
    out.write("fig3_curve.csv", curve_csv(scan));
    auto small = check_small_width(scan);
    auto crossover = check_crossover(scan);
    m.checks.insert(m.checks.end(), small.begin(), small.end());
    m.checks.insert(m.checks.end(), crossover.begin(), crossover.end());
  }
  for (const ScanPoint& p : scan) {
    if (!p.ok) {
      throw Error(fmt::format("scan point Gamma_a={} failed: {}", number(p.gamma_a), p.error));
    }
  }
}

void run_table2(const ExperimentConfig& cfg, RunManifest& m, OutputWriter& out) {
  const auto n = static_cast<std::uint64_t>(cfg.table2_sample_count());
  for (std::size_t i = 0; i < cfg.table2_sizes.size(); ++i) {
    m.substreams.push_back({fmt::format("N={}", cfg.table2_sizes[i]), table2_first_substream(i), n});
  }
  const std::vector<Table2Row> rows = table2_rows(cfg);
  std::string wkk = moment_csv_header() + "\n";
  std::string wkkp = moment_csv_header() + "\n";
  std::string compare = "N,quantity,sampled,standard_error,analytic,rel_dev\n";
  for (const Table2Row& row : rows) {
    ReservoirParams res = cfg.ensemble.reservoir_a;
    res.size = row.size;
    const double v_k = cfg.ensemble.channel.v2;
    const double v_kp = cfg.ensemble.channel.v3;
    wkk += moment_csv_row(res, v_k, v_k, row.sampled.diagonal) + "\n";
    wkkp += moment_csv_row(res, v_k, v_kp, row.sampled.off_diagonal) + "\n";
    const double sqrt_n = std::sqrt(static_cast<double>(row.n_samples));
    const auto& d = row.sampled.diagonal;
    const auto& o = row.sampled.off_diagonal;
    const auto& a = row.analytic;
    auto line = [&](std::string_view quantity, double sampled, double se, double analytic) {
      compare += csv::join({std::to_string(row.size), quantity, number(sampled), number(se), number(analytic),
                            number((sampled - analytic) / std::abs(analytic))});
      compare += '\n';
    };
    line("im_mean_wkk", d.mean.imag(), d.im_sd / sqrt_n, a.diagonal_mean.imag());
    line("re_sd_wkk", d.re_sd, std::nan(""), a.diagonal_re_sd);
    line("im_sd_wkk", d.im_sd, std::nan(""), a.diagonal_im_sd);
    line("abs2_mean_wkkp", o.abs2_mean, o.abs2_sd / sqrt_n, a.off_abs2_mean);
    line("abs2_sd_wkkp", o.abs2_sd, std::nan(""), a.off_abs2_sd);
    line("re_sd_wkkp", o.re_sd, std::nan(""), a.off_re_sd);
    line("im_sd_wkkp", o.im_sd, std::nan(""), a.off_im_sd);
  }
  out.write("table2_wkk.csv", wkk);
  out.write("table2_wkkp.csv", wkkp);
  out.write("table2_compare.csv", compare);
  m.checks = check_table2(rows);
}

std::string integrals_csv(const std::vector<IntegralValue>& rows) {
  std::string out = "id,arg,closed_form,quadrature,rel_err,regime_flag\n";
  for (const IntegralValue& v : rows) {
    const bool complex_valued = v.id == IntegralId::I1;
    auto value = [&](std::complex<double> z) { return complex_valued ? csv::complex_number(z) : number(z.real()); };
    out += csv::join({to_string(v.id), value(v.argument), value(v.closed_form), value(v.quadrature),
                      number(v.discrepancy), to_string(v.regime)});
    out += '\n';
  }
  return out;
}

void run_integrals(RunManifest& m, OutputWriter& out) {
  const std::vector<IntegralValue> rows = integral_table();
  out.write("integrals.csv", integrals_csv(rows));
  m.checks = check_integrals(rows);
}

CheckOutcome make_check(std::string group, std::string name, bool passed, std::string detail) {
  return {std::move(group), std::move(name), passed, std::move(detail)};
}

}  // namespace

std::uint64_t table2_first_substream(std::size_t size_index) {
  return static_cast<std::uint64_t>(size_index) << 32;
}

std::vector<Table2Row> table2_rows(const ExperimentConfig& cfg) {
  std::vector<Table2Row> rows;
  for (std::size_t i = 0; i < cfg.table2_sizes.size(); ++i) {
    SelfEnergyMomentRequest req;
    req.reservoir = cfg.ensemble.reservoir_a;
    req.reservoir.size = cfg.table2_sizes[i];
    req.v_k = cfg.ensemble.channel.v2;
    req.v_kp = cfg.ensemble.channel.v3;
    req.energy = cfg.ensemble.channel.energy;
    req.n_samples = cfg.table2_sample_count();
    req.master_seed = cfg.ensemble.master_seed;
    req.first_substream = table2_first_substream(i);
    req.workers = cfg.ensemble.workers;
    Table2Row row;
    row.size = req.reservoir.size;
    row.n_samples = req.n_samples;
    row.sampled = sample_self_energy_moments(req);
    row.analytic = table1_moments(req.v_k, req.v_kp, req.reservoir);
    rows.push_back(row);
  }
  return rows;
}

std::vector<IntegralValue> integral_table() {
  std::vector<IntegralValue> rows;
  using C = std::complex<double>;
  for (C z : {C(0.0, 0.01), C(0.0, 0.1), C(0.0, 1.0), C(0.0, 10.0), C(0.5, 0.01), C(-0.3, 0.1), C(0.9, -0.05),
              C(2.0, 0.0), C(-5.0, 0.0), C(1.5, 1.5)}) {
    rows.push_back(verify_I1(z));
  }
  for (double y : {0.001, 0.004, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    for (const IntegralValue& v : integrals_I2_I3_I4(y)) {
      rows.push_back(v);
    }
  }
  for (C z : {C(0.0, 0.001), C(0.0, -0.002), C(0.001, 0.003), C(0.0, 0.01), C(0.0, 0.1)}) {
    rows.push_back(verify_I1_small(z));
  }
  for (double y : {0.001, 0.002, 0.004, 0.01, 0.1}) {
    for (const IntegralValue& v : integrals_I2_I4_small(y)) {
      rows.push_back(v);
    }
  }
  return rows;
}

CheckOutcome check_fig1(const HistogramSet& h, const FitResult& fit) {
  constexpr double kNuLo = 1.7;
  constexpr double kNuHi = 2.4;
  constexpr double kBandSigma = 2.0;
  constexpr double kBinFraction = 0.8;
  int occupied = 0;
  int inside = 0;
  for (Eigen::Index b = 0; b < h.n_bins(); ++b) {
    if (h.mean_density(b) <= 0.0) {
      continue;
    }
    ++occupied;
    const double model = pt_bin_average(h.edges(b), h.edges(b + 1), {2.0, 1.0});
    if (std::abs(h.mean_density(b) - model) <= kBandSigma * h.rms_density(b)) {
      ++inside;
    }
  }
  const bool nu_ok = fit.nu_hat >= kNuLo && fit.nu_hat <= kNuHi;
  const bool bins_ok = occupied > 0 && inside >= kBinFraction * occupied;
  return make_check("fig1", "fig1 fitted nu and nu=2 band", nu_ok && bins_ok,
                    fmt::format("nu_hat={:.4f} in [{}, {}]; {}/{} occupied bins within {} rms of PT(nu=2), need {:.0f}%",
                                fit.nu_hat, kNuLo, kNuHi, inside, occupied, kBandSigma, kBinFraction * 100));
}

std::vector<CheckOutcome> check_small_width(const std::vector<ScanPoint>& scan) {
  constexpr double kSmallY = 0.05;
  constexpr double kNuLo = 0.85;
  constexpr double kNuHi = 1.2;
  std::vector<CheckOutcome> out;
  for (const ScanPoint& p : scan) {
    if (p.point.y > kSmallY) {
      continue;
    }
    const bool ok = p.ok && p.point.nu_hat >= kNuLo && p.point.nu_hat <= kNuHi;
    out.push_back(make_check("small_width", fmt::format("Gamma_a={} small-width nu", number(p.gamma_a)), ok,
                             p.ok ? fmt::format("y={:.4f} nu_hat={:.4f} in [{}, {}]", p.point.y, p.point.nu_hat,
                                                kNuLo, kNuHi)
                                  : "point failed: " + p.error));
  }
  return out;
}

std::vector<CheckOutcome> check_crossover(const std::vector<ScanPoint>& scan) {
  constexpr double kStepSlack = 0.15;
  constexpr double kSmallLo = 0.85;
  constexpr double kSmallHi = 1.2;
  constexpr double kLargeY = 2.0;
  constexpr double kLargeNu = 1.8;
  constexpr double kCurveBand = 0.3;
  std::vector<CheckOutcome> out;
  for (const ScanPoint& p : scan) {
    if (!p.ok) {
      out.push_back(make_check("crossover", fmt::format("Gamma_a={} point", number(p.gamma_a)), false, p.error));
    }
  }
  if (!out.empty() || scan.empty()) {
    return out;
  }
  std::vector<const ScanPoint*> sorted;
  for (const ScanPoint& p : scan) {
    sorted.push_back(&p);
  }
  std::sort(sorted.begin(), sorted.end(), [](const ScanPoint* a, const ScanPoint* b) { return a->point.y < b->point.y; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double prev = sorted[i - 1]->point.nu_hat;
    const double cur = sorted[i]->point.nu_hat;
    out.push_back(make_check("crossover", fmt::format("step y={:.4g}->{:.4g} non-decreasing", sorted[i - 1]->point.y,
                                                      sorted[i]->point.y),
                             cur >= prev - kStepSlack,
                             fmt::format("nu_hat {:.4f} -> {:.4f}, allowed drop {}", prev, cur, kStepSlack)));
  }
  const double first = sorted.front()->point.nu_hat;
  out.push_back(make_check("crossover", "nu_hat near 1 at smallest y", first >= kSmallLo && first <= kSmallHi,
                           fmt::format("y={:.4f} nu_hat={:.4f} in [{}, {}]", sorted.front()->point.y, first, kSmallLo,
                                       kSmallHi)));
  for (const ScanPoint* p : sorted) {
    if (p->point.y >= kLargeY) {
      out.push_back(make_check("crossover", fmt::format("y={:.4g} nu_hat >= {}", p->point.y, kLargeNu),
                               p->point.nu_hat >= kLargeNu, fmt::format("nu_hat={:.4f}", p->point.nu_hat)));
    }
  }
  for (const ScanPoint* p : sorted) {
    const double curve = crossover_curve(p->point.y);
    out.push_back(make_check("crossover", fmt::format("y={:.4g} within curve band", p->point.y),
                             std::abs(p->point.nu_hat - curve) <= kCurveBand,
                             fmt::format("nu_hat={:.4f} curve={:.4f} band {}", p->point.nu_hat, curve, kCurveBand)));
  }
  return out;
}

std::vector<CheckOutcome> check_table2(const std::vector<Table2Row>& rows) {
  constexpr double kMeanSe = 3.0;
  constexpr double kDiagSdRel = 0.20;
  constexpr double kOffRel = 0.25;
  std::vector<CheckOutcome> out;
  for (const Table2Row& row : rows) {
    const auto& d = row.sampled.diagonal;
    const auto& o = row.sampled.off_diagonal;
    const auto& a = row.analytic;
    const double se = d.im_sd / std::sqrt(static_cast<double>(row.n_samples));
    const double target = a.diagonal_mean.imag();
    out.push_back(make_check("table2", fmt::format("N={} <Im w_kk>", row.size), std::abs(d.mean.imag() - target) <= kMeanSe * se,
                             fmt::format("{:.4f} vs {:.4f}, {:.2f} standard errors (limit {})", d.mean.imag(), target,
                                         std::abs(d.mean.imag() - target) / se, kMeanSe)));
    auto relative = [&](std::string name, double sampled, double analytic, double tol) {
      const double rel = std::abs(sampled - analytic) / std::abs(analytic);
      out.push_back(make_check("table2", fmt::format("N={} {}", row.size, name), rel <= tol,
                               fmt::format("{:.4f} vs {:.4f}, relative deviation {:.3f} (limit {})", sampled, analytic,
                                           rel, tol)));
    };
    relative("SD(Re w_kk)", d.re_sd, a.diagonal_re_sd, kDiagSdRel);
    relative("SD(Im w_kk)", d.im_sd, a.diagonal_im_sd, kDiagSdRel);
    relative("<|w_kk'|^2>", o.abs2_mean, a.off_abs2_mean, kOffRel);
    relative("SD(|w_kk'|^2)", o.abs2_sd, a.off_abs2_sd, kOffRel);
  }
  return out;
}

std::vector<CheckOutcome> check_integrals(const std::vector<IntegralValue>& rows) {
  constexpr double kExactTol = 1e-8;
  constexpr double kAsymptoticTol = 0.01;
  std::vector<CheckOutcome> out;
  for (const IntegralValue& v : rows) {
    if (v.regime == Regime::asymptotic_outside) {
      continue;
    }
    const double tol = v.regime == Regime::exact ? kExactTol : kAsymptoticTol;
    const std::string arg = v.id == IntegralId::I1 ? csv::complex_number(v.argument) : number(v.argument.real());
    out.push_back(make_check("integrals", fmt::format("{}({}) {}", to_string(v.id), arg, to_string(v.regime)),
                             v.discrepancy <= tol,
                             fmt::format("relative error {:.3e} (limit {:.0e})", v.discrepancy, tol)));
  }
  return out;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["experiment"] = m.experiment;
  j["status"] = m.status;
  if (!m.error.empty()) {
    j["error"] = m.error;
  }
  j["version"] = m.version;
  j["config_hash"] = m.config_hash;
  j["config"] = m.config_text;
  j["master_seed"] = m.master_seed;
  j["rng"] = "philox4x32-10, key = master_seed, counter = (block, substream)";
  auto& streams = j["substreams"] = nlohmann::ordered_json::array();
  for (const SubstreamRange& s : m.substreams) {
    streams.push_back({{"label", s.label}, {"first", s.first}, {"count", s.count}});
  }
  j["excluded_samples"] = m.excluded_samples;
  j["duration_seconds"] = m.duration_seconds;
  j["outputs"] = m.outputs;
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const CheckOutcome& c : m.checks) {
    checks.push_back({{"group", c.group}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return j.dump(2) + "\n";
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.experiment = to_string(cfg.experiment);
  m.config_hash = config_hash(cfg);
  m.config_text = canonical_config(cfg);
  m.master_seed = cfg.ensemble.master_seed;
  OutputWriter out(cfg, m);
  auto finish = [&] {
    m.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.write_raw("manifest.json", manifest_json(m));
  };
  try {
    switch (cfg.experiment) {
      case Experiment::fig1:
      case Experiment::custom:
        run_single(cfg, to_string(cfg.experiment), m, out);
        break;
      case Experiment::fig2:
      case Experiment::fig3:
        run_scan(cfg, m, out);
        break;
      case Experiment::table2:
        run_table2(cfg, m, out);
        break;
      case Experiment::integrals:
        run_integrals(m, out);
        break;
    }
  } catch (const std::exception& e) {
    m.status = "failed";
    m.error = e.what();
    try {
      finish();
    } catch (const std::exception&) {
    }
    throw;
  }
  finish();
  return m;
}

}  // namespace ptx
