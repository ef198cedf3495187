#include "ptx/reaction.hpp"

#include "ptx/eigen_sym.hpp"
#include "ptx/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptx {

namespace {

constexpr double kTinyDenominator = 1e-300;

struct Shifted {
  Complex w22;
  Complex w23;
  Complex w33;
  Complex w44;
};

Shifted shifted(const SelfEnergySet& w) {
  return {w.w22 - w.energy, w.w23, w.w33 - w.energy, w.w44 - w.energy};
}

}  // namespace

void ChannelParams::validate() const {
  for (double x : {t1, t2, energy, v2, v3, v4}) {
    if (!std::isfinite(x)) {
      throw DomainError("channel parameters must be finite");
    }
  }
  if (t1 == 0.0) {
    throw DomainError("channel parameters: t1 must be nonzero");
  }
  if (v2 < 0.0 || v3 < 0.0 || v4 < 0.0) {
    throw DomainError("channel parameters: coupling scales must be non-negative");
  }
}

ReactionAmplitudes reduced_solve(const SelfEnergySet& w, const ChannelParams& ch, Complex phi1) {
  const Shifted m = shifted(w);
  const double t2sq = ch.t2 * ch.t2;
  const Complex s = m.w33 * m.w44 - t2sq;
  const Complex d = m.w22 * s - m.w23 * m.w23 * m.w44;
  if (!(std::abs(d) > kTinyDenominator)) {
    throw DegenerateDenominator("reduced_solve: |D| vanishes for this parameter set");
  }
  const Complex drive = ch.t1 * phi1 / d;
  ReactionAmplitudes amp;
  amp.phi1 = phi1;
  amp.phi2 = -s * drive;
  amp.phi3 = m.w23 * m.w44 * drive;
  amp.phi4 = -m.w23 * ch.t2 * drive;
  return amp;
}

double reduced_residual(const ReactionAmplitudes& amp, const SelfEnergySet& w, const ChannelParams& ch) {
  const Shifted m = shifted(w);
  const Complex drive = ch.t1 * amp.phi1;
  const Complex r0 = m.w22 * amp.phi2 + m.w23 * amp.phi3 + drive;
  const Complex r1 = m.w23 * amp.phi2 + m.w33 * amp.phi3 + ch.t2 * amp.phi4;
  const Complex r2 = ch.t2 * amp.phi3 + m.w44 * amp.phi4;
  return std::max({std::abs(r0), std::abs(r1), std::abs(r2)}) / std::abs(drive);
}

Fluxes fluxes(const ReactionAmplitudes& amp, const ChannelParams& ch) {
  return {2.0 * ch.t1 * std::imag(amp.phi1 * std::conj(amp.phi2)),
          2.0 * ch.t2 * std::imag(amp.phi3 * std::conj(amp.phi4))};
}

double p_b(const SelfEnergySet& w, double t2) {
  if (!(w.gamma_a > 0.0) || !(w.gamma_b > 0.0)) {
    throw DomainError("p_b: decay widths must be positive");
  }
  const Shifted m = shifted(w);
  const double t2sq = t2 * t2;
  const Complex s = m.w33 * m.w44 - t2sq;
  const double numerator = t2sq * std::norm(m.w23) * m.w44.imag();
  const double denominator = m.w22.imag() * std::norm(s) - std::imag(m.w23 * m.w23 * m.w44 * std::conj(s));
  if (!(std::abs(denominator) > kTinyDenominator)) {
    throw DegenerateDenominator("p_b: vanishing denominator");
  }
  return numerator / denominator;
}

ReactionResult evaluate_reaction(const SelfEnergySet& w, const ChannelParams& ch, Complex phi1) {
  const ReactionAmplitudes amp = reduced_solve(w, ch, phi1);
  const Fluxes f = fluxes(amp, ch);
  if (!(std::abs(f.phi12) > 0.0)) {
    throw DegenerateDenominator("evaluate_reaction: entrance flux vanishes");
  }
  const Shifted m = shifted(w);
  ReactionResult r;
  r.phi12 = f.phi12;
  r.phi34 = f.phi34;
  r.p_b = f.phi34 / f.phi12;
  r.branching_ratio = r.p_b < 1.0 ? r.p_b / (1.0 - r.p_b) : std::numeric_limits<double>::infinity();
  r.s = m.w33 * m.w44 - ch.t2 * ch.t2;
  r.denominator = m.w22 * r.s - m.w23 * m.w23 * m.w44;
  return r;
}

double branching_ratio(const ReactionResult& result) {
  if (!(result.p_b < 1.0)) {
    throw DegenerateDenominator("branching_ratio: P_b = 1 gives an infinite branching ratio");
  }
  return result.p_b / (1.0 - result.p_b);
}

FullChainResult full_chain_oracle(const GoeMatrix<double>& ha, const GoeMatrix<double>& hb,
                                  const CouplingVector<double>& v2, const CouplingVector<double>& v3,
                                  const CouplingVector<double>& v4, const ChannelParams& ch, double gamma_a,
                                  double gamma_b, Complex phi1) {
  using CMatrix = Eigen::MatrixXcd;
  using CVector = Eigen::VectorXcd;
  if (!(gamma_a > 0.0) || !(gamma_b > 0.0)) {
    throw DomainError("full_chain_oracle: decay widths must be positive");
  }
  const Eigen::Index na = ha.rows();
  const Eigen::Index nb = hb.rows();
  if (ha.cols() != na || hb.cols() != nb || v2.size() != na || v3.size() != na || v4.size() != nb) {
    throw DomainError("full_chain_oracle: dimension mismatch");
  }

  // Unknowns (phi2, Psi_a, phi3, phi4, Psi_b); rows are those of (H - E) Psi = 0.
  const Eigen::Index i2 = 0;
  const Eigen::Index ia = 1;
  const Eigen::Index i3 = ia + na;
  const Eigen::Index i4 = i3 + 1;
  const Eigen::Index ib = i4 + 1;
  const Eigen::Index n = ib + nb;
  const double e = ch.energy;

  CMatrix m = CMatrix::Zero(n, n);
  m(i2, i2) = -e;
  m.block(i2, ia, 1, na) = v2.transpose().cast<Complex>();
  m.block(ia, i2, na, 1) = v2.cast<Complex>();
  m.block(ia, ia, na, na) = ha.cast<Complex>();
  m.block(ia, ia, na, na).diagonal().array() -= Complex(e, gamma_a / 2);
  m.block(ia, i3, na, 1) = v3.cast<Complex>();
  m.block(i3, ia, 1, na) = v3.transpose().cast<Complex>();
  m(i3, i3) = -e;
  m(i3, i4) = ch.t2;
  m(i4, i3) = ch.t2;
  m(i4, i4) = -e;
  m.block(i4, ib, 1, nb) = v4.transpose().cast<Complex>();
  m.block(ib, i4, nb, 1) = v4.cast<Complex>();
  m.block(ib, ib, nb, nb) = hb.cast<Complex>();
  m.block(ib, ib, nb, nb).diagonal().array() -= Complex(e, gamma_b / 2);

  CVector rhs = CVector::Zero(n);
  rhs(i2) = -ch.t1 * phi1;

  const Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) {
    throw DegenerateDenominator("full_chain_oracle: singular Hamiltonian system");
  }
  const CVector x = lu.solve(rhs);

  FullChainResult out;
  out.amplitudes = {phi1, x(i2), x(i3), x(i4)};
  const Fluxes f = fluxes(out.amplitudes, ch);
  out.absorption_a = gamma_a * x.segment(ia, na).squaredNorm();
  out.absorption_b = gamma_b * x.segment(ib, nb).squaredNorm();
  auto& r = out.reaction;
  r.phi12 = f.phi12;
  r.phi34 = f.phi34;
  if (!(std::abs(f.phi12) > 0.0)) {
    throw DegenerateDenominator("full_chain_oracle: entrance flux vanishes");
  }
  r.p_b = f.phi34 / f.phi12;
  r.branching_ratio = r.p_b < 1.0 ? r.p_b / (1.0 - r.p_b) : std::numeric_limits<double>::infinity();
  // D and s are properties of the reduced system; the oracle leaves them unset.
  return out;
}

ReactionDraw draw_reaction(const ReservoirParams& a, const ReservoirParams& b, const ChannelParams& ch,
                           RandomStream& stream) {
  ReactionDraw draw;
  draw.ha = sample_goe(a, stream);
  draw.v2 = sample_coupling(a, ch.v2, stream);
  draw.v3 = sample_coupling(a, ch.v3, stream);
  draw.hb = sample_goe(b, stream);
  draw.v4 = sample_coupling(b, ch.v4, stream);
  return draw;
}

SelfEnergySet spectral_self_energies(const ReactionDraw& draw, const ReservoirParams& a, const ReservoirParams& b,
                                     const ChannelParams& ch) {
  Eigen::MatrixXd couplings_a(draw.v2.size(), 2);
  couplings_a << draw.v2, draw.v3;
  const auto spec_a = eig_sym_projected(draw.ha, couplings_a);
  const auto spec_b = eig_sym_projected(draw.hb, draw.v4);
  SelfEnergySet w;
  w.energy = ch.energy;
  w.gamma_a = a.gamma;
  w.gamma_b = b.gamma;
  w.w22 = self_energy_spectral(spec_a, 0, 0, ch.energy, a.gamma);
  w.w23 = self_energy_spectral(spec_a, 0, 1, ch.energy, a.gamma);
  w.w33 = self_energy_spectral(spec_a, 1, 1, ch.energy, a.gamma);
  w.w44 = self_energy_spectral(spec_b, 0, 0, ch.energy, b.gamma);
  return w;
}

}  // namespace ptx
