#pragma once

#include "ptx/goe.hpp"
#include "ptx/moments.hpp"

#include <cstdint>
#include <string>

namespace ptx {

struct SelfEnergyMomentRequest {
  ReservoirParams reservoir;
  double v_k = 0.1;
  double v_kp = 0.1;
  double energy = 0.0;
  std::int64_t n_samples = 100;
  std::uint64_t master_seed = 1;
  // Sample i draws from substream first_substream + i.
  std::uint64_t first_substream = 0;
  unsigned workers = 0;
};

struct SelfEnergyMoments {
  MomentSummary diagonal;      // w_kk
  MomentSummary off_diagonal;  // w_kk'
  std::int64_t failures = 0;
};

// Independent (GOE, a, b) realizations, each drawn in the order H, a, b from
// its own substream; w_kk = a.G.a and w_kk' = a.G.b at the requested energy.
// Throws if any sample's eigensolver fails, after counting all failures.
SelfEnergyMoments sample_self_energy_moments(const SelfEnergyMomentRequest& request);

std::string moment_csv_header();
// N, v_g, v_k, v_k', Gamma, n_samples, re_mean, im_mean, re_sd, im_sd,
// abs2_mean, abs2_sd, cross_corr
std::string moment_csv_row(const ReservoirParams& reservoir, double v_k, double v_kp, const MomentSummary& m);

}  // namespace ptx
