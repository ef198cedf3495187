#include "ptx/ensemble.hpp"
#include "ptx/error.hpp"
#include "ptx/reaction.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ptx;

namespace {

SelfEnergySet random_set(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> neg(-1.0, -0.05);
  SelfEnergySet w;
  w.w22 = {u(rng), neg(rng)};
  w.w23 = {u(rng), u(rng)};
  w.w33 = {u(rng), neg(rng)};
  w.w44 = {u(rng), neg(rng)};
  w.gamma_a = 0.1;
  w.gamma_b = 0.1;
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("reaction") {

TEST_CASE("decoupled bridge") {
  std::mt19937_64 rng(1);
  SelfEnergySet w = random_set(rng);
  w.w23 = 0.0;
  const ChannelParams ch;
  const auto amp = reduced_solve(w, ch, {0.7, 0.2});
  CHECK(amp.phi3 == Complex(0.0, 0.0));
  CHECK(amp.phi4 == Complex(0.0, 0.0));
  const Complex expected = -ch.t1 * Complex(0.7, 0.2) / w.w22;
  CHECK(std::abs(amp.phi2 - expected) < 1e-15 * std::abs(expected));
  CHECK(p_b(w, ch.t2) == 0.0);
}

TEST_CASE("severed bridge") {
  std::mt19937_64 rng(2);
  const SelfEnergySet w = random_set(rng);
  ChannelParams ch;
  ch.t2 = 0.0;
  const auto amp = reduced_solve(w, ch);
  CHECK(amp.phi4 == Complex(0.0, 0.0));
  CHECK(fluxes(amp, ch).phi34 == 0.0);
  CHECK(p_b(w, 0.0) == 0.0);
}

TEST_CASE("amplitudes solve the reduced system") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const SelfEnergySet w = random_set(rng);
    ChannelParams ch;
    ch.t1 = 0.5 + (i % 3);
    ch.t2 = -0.3 * (i % 5);
    CHECK(reduced_residual(reduced_solve(w, ch), w, ch) < 1e-10);
  }
}

TEST_CASE("shifted energy enters the diagonal") {
  std::mt19937_64 rng(4);
  SelfEnergySet w = random_set(rng);
  w.energy = 0.3;
  ChannelParams ch;
  ch.energy = 0.3;
  CHECK(reduced_residual(reduced_solve(w, ch), w, ch) < 1e-10);
}

TEST_CASE("real amplitudes carry no flux") {
  const ReactionAmplitudes amp{{1.0, 0.0}, {0.4, 0.0}, {-2.0, 0.0}, {0.3, 0.0}};
  const auto f = fluxes(amp, ChannelParams{});
  CHECK(f.phi12 == 0.0);
  CHECK(f.phi34 == 0.0);
}

TEST_CASE("flux ratio equals the closed form over an ensemble") {
  EnsembleConfig cfg;
  double worst = 0.0;
  double mean_flux = 0.0;
  double mean_closed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    RandomStream s(cfg.master_seed, static_cast<std::uint64_t>(i));
    const auto draw = draw_reaction(cfg.reservoir_a, cfg.reservoir_b, cfg.channel, s);
    const auto w = spectral_self_energies(draw, cfg.reservoir_a, cfg.reservoir_b, cfg.channel);
    const auto r = evaluate_reaction(w, cfg.channel);
    const double closed = p_b(w, cfg.channel.t2);
    worst = std::max(worst, rel(r.p_b, closed));
    mean_flux += r.p_b;
    mean_closed += closed;
  }
  CHECK(worst < 1e-10);
  CHECK(rel(mean_flux, mean_closed) < 1e-10);
}

TEST_CASE("branching ratio") {
  ReactionResult r;
  r.p_b = 0.0;
  CHECK(branching_ratio(r) == 0.0);
  r.p_b = 0.5;
  CHECK(branching_ratio(r) == doctest::Approx(1.0).epsilon(1e-15));
  r.p_b = 1.0;
  CHECK_THROWS_AS(branching_ratio(r), DegenerateDenominator);

  const ReservoirParams a{20, 0.1, 0.1};
  const ChannelParams ch;
  for (std::uint64_t k = 0; k < 50; ++k) {
    RandomStream s(5, k);
    const auto res = evaluate_reaction(spectral_self_energies(draw_reaction(a, a, ch, s), a, a, ch), ch);
    CHECK(std::abs(res.branching_ratio * (1.0 - res.p_b) - res.p_b) < 1e-12);
    CHECK(res.branching_ratio == branching_ratio(res));
  }
}

TEST_CASE("reduced path matches the full chain") {
  const ReservoirParams a{4, 0.1, 0.1};
  const ReservoirParams b{4, 0.1, 0.1};
  for (std::uint64_t k = 0; k < 20; ++k) {
    ChannelParams ch;
    ch.t2 = k % 2 == 0 ? 1.0 : -0.3;
    ch.energy = k % 3 == 0 ? 0.0 : 0.02;
    RandomStream s(42, k);
    const auto draw = draw_reaction(a, b, ch, s);
    const auto reduced = evaluate_reaction(spectral_self_energies(draw, a, b, ch), ch);
    const auto full = full_chain_oracle(draw.ha, draw.hb, draw.v2, draw.v3, draw.v4, ch, a.gamma, b.gamma);
    CHECK(rel(full.reaction.p_b, reduced.p_b) < 1e-10);
    CHECK(rel(full.reaction.phi12, reduced.phi12) < 1e-10);
    CHECK(rel(full.reaction.phi34, reduced.phi34) < 1e-10);
    // Conservation: entrance flux = absorption in a + bridge flux; bridge flux is absorbed in b.
    CHECK(rel(full.absorption_a + full.reaction.phi34, full.reaction.phi12) < 1e-8);
    CHECK(rel(full.absorption_b, full.reaction.phi34) < 1e-8);
  }
}

TEST_CASE("disconnected bridge coupling gives zero P_b") {
  const ReservoirParams a{4, 0.1, 0.1};
  ChannelParams ch;
  ch.v3 = 0.0;
  RandomStream s(7, 0);
  const auto draw = draw_reaction(a, a, ch, s);
  CHECK(full_chain_oracle(draw.ha, draw.hb, draw.v2, draw.v3, draw.v4, ch, 0.1, 0.1).reaction.p_b == 0.0);
  CHECK(evaluate_reaction(spectral_self_energies(draw, a, a, ch), ch).p_b == 0.0);
}

TEST_CASE("P_b is a probability") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> width(0.001, 1.0);
  std::uniform_real_distribution<double> hop(-3.0, 3.0);
  int violations = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const ReservoirParams a{8, 0.1, width(rng)};
    const ReservoirParams b{8, 0.1, width(rng)};
    ChannelParams ch;
    ch.t2 = hop(rng);
    RandomStream s(9, k);
    const auto r = evaluate_reaction(spectral_self_energies(draw_reaction(a, b, ch, s), a, b, ch), ch);
    violations += (r.p_b < 0.0 || r.p_b > 1.0) ? 1 : 0;
  }
  CHECK(violations == 0);
}

TEST_CASE("degenerate inputs") {
  SelfEnergySet w;
  w.gamma_a = 0.1;
  w.gamma_b = 0.1;
  CHECK_THROWS_AS(reduced_solve(w, ChannelParams{}), DegenerateDenominator);
  CHECK_THROWS_AS(evaluate_reaction(w, ChannelParams{}), DegenerateDenominator);
  std::mt19937_64 rng(8);
  w = random_set(rng);
  w.gamma_b = 0.0;
  CHECK_THROWS_AS(p_b(w, 1.0), DomainError);
}

TEST_CASE("channel validation") {
  CHECK_NOTHROW(ChannelParams{}.validate());
  ChannelParams ch;
  ch.t1 = 0.0;
  CHECK_THROWS_AS(ch.validate(), DomainError);
  ch = {};
  ch.v4 = -0.1;
  CHECK_THROWS_AS(ch.validate(), DomainError);
  ch = {};
  ch.t2 = std::nan("");
  CHECK_THROWS_AS(ch.validate(), DomainError);
}

TEST_CASE("draws are reproducible") {
  const ReservoirParams a{10, 0.1, 0.1};
  RandomStream s1(5, 5);
  RandomStream s2(5, 5);
  const auto d1 = draw_reaction(a, a, ChannelParams{}, s1);
  const auto d2 = draw_reaction(a, a, ChannelParams{}, s2);
  CHECK(d1.ha == d2.ha);
  CHECK(d1.hb == d2.hb);
  CHECK(d1.v4 == d2.v4);
}

}  // TEST_SUITE

TEST_SUITE("reaction_slow") {

TEST_CASE("fitted nu barely depends on the reservoir-b width") {
  EnsembleConfig cfg;
  cfg.n_samples = 200;
  cfg.reservoir_b.gamma = 0.05;
  const double narrow = fit_nu(run_ensemble(cfg).histogram).nu_hat;
  cfg.reservoir_b.gamma = 0.5;
  const double wide = fit_nu(run_ensemble(cfg).histogram).nu_hat;
  CHECK(std::abs(narrow - wide) < 0.15);
}

}  // TEST_SUITE
