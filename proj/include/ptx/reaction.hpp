#pragma once

#include "ptx/goe.hpp"
#include "ptx/random.hpp"
#include "ptx/self_energy.hpp"

#include <Eigen/Core>

#include <complex>
#include <string>

namespace ptx {

using Complex = std::complex<double>;

// Entrance hopping t1, bridge hopping t2, total energy and the coupling
// scales of the channel vectors v2, v3 (reservoir a) and v4 (reservoir b).
struct ChannelParams {
  double t1 = 1.0;
  double t2 = 1.0;
  double energy = 0.0;
  double v2 = 0.1;
  double v3 = 0.1;
  double v4 = 0.1;

  void validate() const;
};

struct ReactionAmplitudes {
  Complex phi1{1.0, 0.0};
  Complex phi2;
  Complex phi3;
  Complex phi4;
};

struct Fluxes {
  double phi12 = 0.0;  // entrance site 1 -> 2
  double phi34 = 0.0;  // bridge site 3 -> 4
};

struct ReactionResult {
  double phi12 = 0.0;
  double phi34 = 0.0;
  double p_b = 0.0;
  // p_b / (1 - p_b); +inf when p_b == 1.
  double branching_ratio = 0.0;
  Complex denominator;  // D
  Complex s;            // (w33 - E)(w44 - E) - t2^2
};

// Closed-form amplitudes of the reduced 3x3 channel system with phi1 fixed.
ReactionAmplitudes reduced_solve(const SelfEnergySet& w, const ChannelParams& ch, Complex phi1 = {1.0, 0.0});

// Max-norm residual of the reduced system relative to |t1 phi1|.
double reduced_residual(const ReactionAmplitudes& amp, const SelfEnergySet& w, const ChannelParams& ch);

// Phi_ij = 2 t_ij Im(phi_i conj(phi_j)); positive for flux flowing i -> j.
Fluxes fluxes(const ReactionAmplitudes& amp, const ChannelParams& ch);

// Closed-form decay probability through reservoir b.
double p_b(const SelfEnergySet& w, double t2);

// Reduced path: amplitudes, fluxes, and P_b as the flux ratio Phi34/Phi12.
ReactionResult evaluate_reaction(const SelfEnergySet& w, const ChannelParams& ch, Complex phi1 = {1.0, 0.0});

// B_r = Phi34 / (Phi12 - Phi34) = P_b / (1 - P_b).
double branching_ratio(const ReactionResult& result);

struct FullChainResult {
  ReactionResult reaction;
  ReactionAmplitudes amplitudes;
  double absorption_a = 0.0;  // Gamma_a sum |Psi_a|^2
  double absorption_b = 0.0;
};

// Solves the complete (N_a + N_b + 4)-site Hamiltonian with phi1 fixed by
// dense complex LU; independent of the self-energy route.
FullChainResult full_chain_oracle(const GoeMatrix<double>& ha, const GoeMatrix<double>& hb,
                                  const CouplingVector<double>& v2, const CouplingVector<double>& v3,
                                  const CouplingVector<double>& v4, const ChannelParams& ch, double gamma_a,
                                  double gamma_b, Complex phi1 = {1.0, 0.0});

// Random inputs of one reaction sample, drawn in the order H_a, v2, v3, H_b, v4.
struct ReactionDraw {
  GoeMatrix<double> ha;
  GoeMatrix<double> hb;
  CouplingVector<double> v2;
  CouplingVector<double> v3;
  CouplingVector<double> v4;
};

ReactionDraw draw_reaction(const ReservoirParams& a, const ReservoirParams& b, const ChannelParams& ch,
                           RandomStream& stream);

// Self-energies of a draw via the spectral representation.
SelfEnergySet spectral_self_energies(const ReactionDraw& draw, const ReservoirParams& a, const ReservoirParams& b,
                                     const ChannelParams& ch);

}  // namespace ptx
