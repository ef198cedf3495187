// One PASS/FAIL line per acceptance criterion. With no arguments every
// criterion runs; otherwise only the listed ones.

#include "ptx/experiment.hpp"
#include "ptx/histogram.hpp"
#include "ptx/porter_thomas.hpp"
#include "ptx/reaction.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace ptx;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool passed = true;
  std::string summary;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      failures.push_back(what);
    }
  }
};

fs::path g_out = "acceptance_out";

ExperimentConfig preset(Experiment e, const std::string& dir) {
  ExperimentConfig cfg = parse_config("");
  cfg.experiment = e;
  cfg.out_dir = g_out / dir;
  return cfg;
}

Verdict from_checks(const std::vector<CheckOutcome>& checks, const std::string& group) {
  Verdict v;
  int n = 0;
  for (const auto& c : checks) {
    if (c.group != group) {
      continue;
    }
    ++n;
    v.require(c.passed, c.name + ": " + c.detail);
  }
  v.require(n > 0, "no checks evaluated for " + group);
  v.summary = fmt::format("{} of {} checks passed", n - static_cast<int>(v.failures.size()), n);
  return v;
}

Verdict table2() {
  return from_checks(run_experiment(preset(Experiment::table2, "table2")).checks, "table2");
}

Verdict fig1() {
  const auto m = run_experiment(preset(Experiment::fig1, "fig1"));
  Verdict v = from_checks(m.checks, "fig1");
  v.summary = m.checks.empty() ? v.summary : m.checks.front().detail;
  return v;
}

Verdict small_width() {
  ExperimentConfig cfg = preset(Experiment::fig2, "fig2_small_width");
  cfg.gamma_grid = {1e-3};
  const auto m = run_experiment(cfg);
  Verdict v = from_checks(m.checks, "small_width");
  v.summary = m.checks.empty() ? v.summary : m.checks.front().detail;
  return v;
}

Verdict crossover() {
  return from_checks(run_experiment(preset(Experiment::fig3, "fig3")).checks, "crossover");
}

Verdict oracles() {
  constexpr double kTol = 1e-10;
  Verdict v;
  double worst_spectral = 0.0;
  for (Eigen::Index n : {4, 20, 100}) {
    const ReservoirParams p{n, 0.1, 0.1};
    for (std::uint64_t k = 0; k < 10; ++k) {
      RandomStream s(1001, k);
      const auto h = sample_goe(p, s);
      const auto a = sample_coupling(p, 0.1, s);
      const auto b = sample_coupling(p, 0.1, s);
      const auto spec = eig_sym(h);
      for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&a, &a}}) {
        const auto direct = self_energy_direct(h, *x, *y, 0.0, p.gamma);
        const double gap = std::abs(self_energy_spectral(spec, *x, *y, 0.0, p.gamma) - direct) / std::abs(direct);
        worst_spectral = std::max(worst_spectral, gap);
      }
    }
  }
  v.require(worst_spectral <= kTol, fmt::format("spectral vs direct: {:.3e}", worst_spectral));

  const EnsembleConfig cfg;
  double worst_pb = 0.0;
  for (int i = 0; i < 1000; ++i) {
    RandomStream s(cfg.master_seed, static_cast<std::uint64_t>(i));
    const auto draw = draw_reaction(cfg.reservoir_a, cfg.reservoir_b, cfg.channel, s);
    const auto w = spectral_self_energies(draw, cfg.reservoir_a, cfg.reservoir_b, cfg.channel);
    const double flux = evaluate_reaction(w, cfg.channel).p_b;
    const double closed = p_b(w, cfg.channel.t2);
    worst_pb = std::max(worst_pb, std::abs(flux - closed) / std::abs(closed));
  }
  v.require(worst_pb <= kTol, fmt::format("closed-form P_b vs flux ratio: {:.3e}", worst_pb));

  double worst_chain = 0.0;
  const ReservoirParams small{4, 0.1, 0.1};
  for (std::uint64_t k = 0; k < 100; ++k) {
    RandomStream s(1002, k);
    const auto draw = draw_reaction(small, small, cfg.channel, s);
    const double reduced = evaluate_reaction(spectral_self_energies(draw, small, small, cfg.channel), cfg.channel).p_b;
    const double full =
        full_chain_oracle(draw.ha, draw.hb, draw.v2, draw.v3, draw.v4, cfg.channel, small.gamma, small.gamma).reaction.p_b;
    worst_chain = std::max(worst_chain, std::abs(full - reduced) / std::abs(full));
  }
  v.require(worst_chain <= kTol, fmt::format("full chain vs reduced path: {:.3e}", worst_chain));
  v.summary = fmt::format("max relative gaps {:.1e} / {:.1e} / {:.1e} (limit {:.0e})", worst_spectral, worst_pb,
                          worst_chain, kTol);
  return v;
}

Verdict conservation() {
  constexpr double kTol = 1e-8;
  constexpr int kDraws = 100000;
  Verdict v;
  const ChannelParams base;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const ReservoirParams a{k % 2 == 0 ? 4 : 12, 0.1, 0.02 + 0.01 * static_cast<double>(k % 10)};
    const ReservoirParams b{8, 0.1, 0.1};
    ChannelParams ch = base;
    ch.t2 = k % 3 == 0 ? 1.0 : -0.4;
    RandomStream s(2001, k);
    const auto draw = draw_reaction(a, b, ch, s);
    const auto r = full_chain_oracle(draw.ha, draw.hb, draw.v2, draw.v3, draw.v4, ch, a.gamma, b.gamma);
    worst = std::max(worst, std::abs(r.reaction.phi12 - r.absorption_a - r.reaction.phi34) / r.reaction.phi12);
  }
  v.require(worst <= kTol, fmt::format("flux balance gap {:.3e}", worst));

  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> log_width(std::log(1e-3), std::log(1.0));
  std::uniform_real_distribution<double> hop(-3.0, 3.0);
  int violations = 0;
  for (int k = 0; k < kDraws; ++k) {
    const ReservoirParams a{10, 0.1, std::exp(log_width(rng))};
    const ReservoirParams b{10, 0.1, std::exp(log_width(rng))};
    ChannelParams ch = base;
    ch.t2 = hop(rng);
    RandomStream s(2003, static_cast<std::uint64_t>(k));
    const double pb = evaluate_reaction(spectral_self_energies(draw_reaction(a, b, ch, s), a, b, ch), ch).p_b;
    violations += (pb < 0.0 || pb > 1.0) ? 1 : 0;
  }
  v.require(violations == 0, fmt::format("{} of {} draws outside [0, 1]", violations, kDraws));
  v.summary = fmt::format("balance gap {:.1e} (limit {:.0e}); {} of {} P_b outside [0, 1]", worst, kTol, violations,
                          kDraws);
  return v;
}

Verdict estimators() {
  constexpr std::size_t kSamples = 100000;
  constexpr double kMomentTol = 0.05;
  constexpr double kFitTol = 0.10;
  Verdict v;
  std::string summary;
  for (int nu : {1, 2}) {
    std::mt19937_64 rng(3000 + nu);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> samples(kSamples);
    for (double& x : samples) {
      double sum = 0.0;
      for (int k = 0; k < nu; ++k) {
        const double z = g(rng);
        sum += z * z;
      }
      x = sum / nu;
    }
    std::vector<std::vector<double>> runs(50);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      runs[i % runs.size()].push_back(samples[i]);
    }
    const double moment = nu_eff(samples);
    const double fitted = fit_nu(build_histogram(runs)).nu_hat;
    v.require(std::abs(moment - nu) <= kMomentTol * nu, fmt::format("nu_eff {:.4f} for nu={}", moment, nu));
    v.require(std::abs(fitted - nu) <= kFitTol * nu, fmt::format("fit_nu {:.4f} for nu={}", fitted, nu));
    summary += fmt::format("{}nu={}: nu_eff={:.4f} fit={:.4f}", summary.empty() ? "" : "; ", nu, moment, fitted);
  }
  v.summary = summary;
  return v;
}

Verdict integrals() {
  return from_checks(run_experiment(preset(Experiment::integrals, "integrals")).checks, "integrals");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  Verdict v;
  int files = 0;
  for (Experiment e : {Experiment::custom, Experiment::fig2, Experiment::fig3, Experiment::table2, Experiment::integrals}) {
    ExperimentConfig cfg = parse_config(
        "n_runs = 4\nn_samples = 50\nNg_a = 40\nNg_b = 40\ngamma_grid = 0.003, 0.3\n"
        "table2_sizes = 50, 100\ntable2_samples = 20\n");
    cfg.experiment = e;
    std::vector<RunManifest> manifests;
    for (unsigned workers : {1u, 4u}) {
      cfg.ensemble.workers = workers;
      cfg.out_dir = g_out / fmt::format("determinism_{}_{}", to_string(e), workers);
      fs::remove_all(cfg.out_dir);
      manifests.push_back(run_experiment(cfg));
    }
    const fs::path first = g_out / fmt::format("determinism_{}_1", to_string(e));
    const fs::path second = g_out / fmt::format("determinism_{}_4", to_string(e));
    v.require(manifests[0].outputs == manifests[1].outputs, to_string(e) + ": different output sets");
    for (const auto& name : manifests[0].outputs) {
      ++files;
      v.require(slurp(first / name) == slurp(second / name), to_string(e) + ": " + name + " differs");
    }
  }
  v.summary = fmt::format("{} output files compared across repeated runs", files);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  std::string out = g_out.string();
  app.add_option("criteria", selected, "criterion numbers (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--out", out, "scratch output directory");
  CLI11_PARSE(app, argc, argv);
  g_out = out;

  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria = {
      {1, {"Sampled self-energy moments", table2}},
      {2, {"Overlapping-resonance endpoint", fig1}},
      {3, {"Small-width limit", small_width}},
      {4, {"Crossover scan", crossover}},
      {5, {"Oracle equivalences", oracles}},
      {6, {"Flux conservation", conservation}},
      {7, {"Estimator recovery", estimators}},
      {8, {"Integral verification", integrals}},
      {9, {"Determinism", determinism}},
  };
  if (selected.empty()) {
    for (const auto& [id, entry] : criteria) {
      selected.push_back(id);
    }
  }
  bool all = true;
  for (int id : selected) {
    const auto& [name, run] = criteria.at(id);
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.passed = false;
      v.summary = std::string("error: ") + e.what();
    }
    fmt::print("{} {}. {}: {}\n", v.passed ? "PASS" : "FAIL", id, name, v.summary);
    for (const auto& f : v.failures) {
      fmt::print("    {}\n", f);
    }
    std::fflush(stdout);
    all = all && v.passed;
  }
  return all ? 0 : 1;
}
