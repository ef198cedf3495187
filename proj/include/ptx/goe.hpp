#pragma once

#include "ptx/error.hpp"
#include "ptx/random.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ptx {

template <typename Scalar>
using GoeMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// One GOE reservoir: dimension, rms off-diagonal element and uniform decay
// width. Level density and band edge are derived on every call.
struct ReservoirParams {
  Eigen::Index size = 100;
  double v = 0.1;
  double gamma = 0.1;

  // Level density at the band centre, sqrt(N) / (pi v).
  double level_density() const {
    return std::sqrt(static_cast<double>(size)) / (std::numbers::pi * v);
  }

  // Semicircle edge, 2 sqrt(N) v.
  double band_edge() const { return 2.0 * std::sqrt(static_cast<double>(size)) * v; }

  void validate(const std::string& label = "reservoir") const {
    if (size < 2) {
      throw DomainError(label + ": dimension must be at least 2");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(label + ": rms matrix element must be positive and finite");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw DomainError(label + ": decay width must be positive and finite");
    }
  }
};

// Real symmetric matrix with entries r_ij v sqrt(1 + delta_ij), r_ij ~ N(0,1)
// drawn for i <= j in column order.
template <typename Scalar = double>
GoeMatrix<Scalar> sample_goe(const ReservoirParams& params, RandomStream& stream) {
  if (params.size < 1 || !(params.v >= 0.0)) {
    throw DomainError("sample_goe: need size >= 1 and v >= 0");
  }
  const Eigen::Index n = params.size;
  const Scalar scale = static_cast<Scalar>(params.v);
  const Scalar diag_scale = static_cast<Scalar>(params.v * std::numbers::sqrt2);
  GoeMatrix<Scalar> h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      h(i, j) = h(j, i) = scale * static_cast<Scalar>(stream.gaussian());
    }
    h(j, j) = diag_scale * static_cast<Scalar>(stream.gaussian());
  }
  return h;
}

// Wigner semicircle rho0 sqrt(1 - (E/E_m)^2).
inline double semicircle_density(const ReservoirParams& params, double energy) {
  const double edge = params.band_edge();
  if (std::abs(energy) > edge) {
    throw DomainError("semicircle_density: |E| exceeds the band edge");
  }
  const double u = energy / edge;
  return params.level_density() * std::sqrt(std::max(0.0, 1.0 - u * u));
}

}  // namespace ptx
