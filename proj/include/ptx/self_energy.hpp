#pragma once

#include "ptx/eigen_sym.hpp"
#include "ptx/error.hpp"
#include "ptx/goe.hpp"
#include "ptx/random.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <complex>
#include <cstdint>

namespace ptx {

template <typename Scalar>
using CouplingVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Channel-to-reservoir coupling with components r_i v_k, r_i ~ N(0,1).
template <typename Scalar = double>
CouplingVector<Scalar> sample_coupling(const ReservoirParams& params, double scale, RandomStream& stream) {
  if (!(scale >= 0.0)) {
    throw DomainError("sample_coupling: coupling scale must be non-negative");
  }
  CouplingVector<Scalar> v(params.size);
  stream.fill_gaussian(v);
  v *= static_cast<Scalar>(scale);
  return v;
}

// The four self-energies of the reduced channel Hamiltonian, evaluated at
// `energy`; w22, w23, w33 come from reservoir a and w44 from reservoir b.
struct SelfEnergySet {
  std::complex<double> w22;
  std::complex<double> w23;
  std::complex<double> w33;
  std::complex<double> w44;
  double energy = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
};

namespace detail {

inline void require_positive_width(double gamma, const char* where) {
  if (!(gamma > 0.0)) {
    throw DomainError(std::string(where) + ": decay width must be positive");
  }
}

}  // namespace detail

// Sum over levels of <a|phi_j><phi_j|b> / (E - E_j + i Gamma/2).
template <typename Scalar, typename DerivedA, typename DerivedB>
std::complex<Scalar> self_energy_spectral(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eigenvalues,
                                          const Eigen::MatrixBase<DerivedA>& overlap_a,
                                          const Eigen::MatrixBase<DerivedB>& overlap_b, double energy,
                                          double gamma) {
  detail::require_positive_width(gamma, "self_energy_spectral");
  if (overlap_a.size() != eigenvalues.size() || overlap_b.size() != eigenvalues.size()) {
    throw DomainError("self_energy_spectral: overlap length does not match the spectrum");
  }
  const Scalar half_width = static_cast<Scalar>(gamma / 2);
  const Scalar e = static_cast<Scalar>(energy);
  Scalar re = 0;
  Scalar im = 0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    // 1 / (x + i h) = (x - i h) / (x^2 + h^2)
    const Scalar x = e - eigenvalues(j);
    const Scalar weight = overlap_a(j) * overlap_b(j) / (x * x + half_width * half_width);
    re += weight * x;
    im -= weight * half_width;
  }
  return {re, im};
}

template <typename Scalar>
std::complex<Scalar> self_energy_spectral(const Spectrum<Scalar>& spec, const CouplingVector<Scalar>& a,
                                          const CouplingVector<Scalar>& b, double energy, double gamma) {
  if (a.size() != spec.eigenvalues.size() || b.size() != spec.eigenvalues.size()) {
    throw DomainError("self_energy_spectral: coupling vector dimension does not match the spectrum");
  }
  const CouplingVector<Scalar> pa = spec.eigenvectors.transpose() * a;
  const CouplingVector<Scalar> pb = spec.eigenvectors.transpose() * b;
  return self_energy_spectral(spec.eigenvalues, pa, pb, energy, gamma);
}

// Rows `row_a`, `row_b` of a projected spectrum hold the coupling overlaps.
template <typename Scalar>
std::complex<Scalar> self_energy_spectral(const ProjectedSpectrum<Scalar>& spec, Eigen::Index row_a,
                                          Eigen::Index row_b, double energy, double gamma) {
  return self_energy_spectral(spec.eigenvalues, spec.overlaps.row(row_a).transpose(),
                              spec.overlaps.row(row_b).transpose(), energy, gamma);
}

// a . (E - H + i Gamma/2)^{-1} . b by partial-pivot LU of the complex
// resolvent matrix.
template <typename Scalar>
std::complex<Scalar> self_energy_direct(const GoeMatrix<Scalar>& h, const CouplingVector<Scalar>& a,
                                        const CouplingVector<Scalar>& b, double energy, double gamma) {
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  detail::require_positive_width(gamma, "self_energy_direct");
  const Eigen::Index n = h.rows();
  if (h.cols() != n || a.size() != n || b.size() != n) {
    throw DomainError("self_energy_direct: dimension mismatch");
  }
  CMatrix resolvent = -h.template cast<Complex>();
  resolvent.diagonal().array() += Complex(static_cast<Scalar>(energy), static_cast<Scalar>(gamma / 2));
  const Eigen::PartialPivLU<CMatrix> lu(resolvent);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > Scalar(0))) {
    throw DegenerateDenominator("self_energy_direct: singular resolvent matrix");
  }
  const CVector x = lu.solve(b.template cast<Complex>());
  return (a.template cast<Complex>().transpose() * x)(0);
}

}  // namespace ptx
