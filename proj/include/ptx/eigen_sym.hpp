#pragma once

#include "ptx/error.hpp"

#include <Eigen/Core>
#include <Eigen/Householder>

#include <cmath>
#include <string>

namespace ptx {

template <typename Scalar>
struct Spectrum {
  // Ascending.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;
  // Column j is the unit eigenvector for eigenvalues(j).
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

// Eigenvalues together with the overlaps <u_r|phi_j> of a few fixed vectors
// u_r with every eigenvector, obtained without forming the eigenvectors.
template <typename Scalar>
struct ProjectedSpectrum {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;
  // overlaps(r, j) = <u_r|phi_j>.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> overlaps;
};

struct EigenSolverOptions {
  int max_iterations_per_eigenvalue = 50;
};

// Householder reduction A = Q T Q^T of a real symmetric matrix. Only the
// lower triangle of the input is referenced.
template <typename Scalar>
struct Tridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector diagonal;
  Vector subdiagonal;  // length n - 1
  Matrix reflectors;   // essential parts below the subdiagonal
  Vector coeffs;       // Householder coefficients, length n - 1

  auto householder_q() const {
    return Eigen::HouseholderSequence<Matrix, Vector>(reflectors, coeffs)
        .setLength(reflectors.rows() - 1)
        .setShift(1);
  }
};

template <typename Derived>
Tridiagonal<typename Derived::Scalar> tridiagonalize(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) {
    throw DomainError("tridiagonalize: matrix must be square");
  }
  Tridiagonal<Scalar> out;
  out.reflectors = input;
  auto& a = out.reflectors;
  out.coeffs = Vector::Zero(std::max<Eigen::Index>(n - 1, 0));
  out.subdiagonal = Vector::Zero(std::max<Eigen::Index>(n - 1, 0));

  Vector work(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index rem = n - k - 1;
    Scalar tau;
    Scalar beta;
    a.col(k).tail(rem).makeHouseholderInPlace(tau, beta);
    // Restore the unit leading entry while the trailing update runs.
    a(k + 1, k) = Scalar(1);
    auto v = a.col(k).tail(rem);
    auto trailing = a.bottomRightCorner(rem, rem);
    auto p = work.head(rem);
    p.noalias() = tau * (trailing.template selfadjointView<Eigen::Lower>() * v);
    p -= (Scalar(0.5) * tau * p.dot(v)) * v;
    trailing.template selfadjointView<Eigen::Lower>().rankUpdate(v, p, Scalar(-1));
    a(k + 1, k) = beta;
    out.subdiagonal(k) = beta;
    out.coeffs(k) = tau;
  }
  out.diagonal = a.diagonal();
  return out;
}

namespace detail {

// (x, y) <- (c x - s y, s x + c y) for columns x = i, y = i + 1.
template <typename Basis, typename Scalar>
inline void rotate_columns(Basis& basis, Eigen::Index i, Scalar c, Scalar s) {
  for (Eigen::Index r = 0; r < basis.rows(); ++r) {
    const Scalar x = basis(r, i);
    const Scalar y = basis(r, i + 1);
    basis(r, i) = c * x - s * y;
    basis(r, i + 1) = s * x + c * y;
  }
}

// Implicit-shift QL on the symmetric tridiagonal (d, e), e(i) coupling d(i)
// and d(i+1). Every plane rotation acting on eigenvector coordinates i, i+1
// is also applied to columns i, i+1 of `basis`, which may have any number of
// rows. On return d holds the (unsorted) eigenvalues.
template <typename Scalar, typename Basis>
void implicit_ql(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e,
                 Basis& basis, const EigenSolverOptions& options) {
  const Eigen::Index n = d.size();
  if (n < 2) {
    return;
  }
  e.conservativeResize(n);
  e(n - 1) = Scalar(0);
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();

  for (Eigen::Index l = 0; l < n; ++l) {
    int iterations = 0;
    Eigen::Index m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const Scalar dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) {
          break;
        }
      }
      if (m == l) {
        break;
      }
      if (iterations++ == options.max_iterations_per_eigenvalue) {
        throw ConvergenceError("eig_sym: implicit QL did not converge for a matrix of order " +
                               std::to_string(n) + " within the cap of " +
                               std::to_string(options.max_iterations_per_eigenvalue) +
                               " iterations per eigenvalue");
      }
      Scalar g = (d(l + 1) - d(l)) / (Scalar(2) * e(l));
      Scalar r = std::hypot(g, Scalar(1));
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      Scalar s = 1;
      Scalar c = 1;
      Scalar p = 0;
      bool underflow = false;
      for (Eigen::Index i = m - 1; i >= l; --i) {
        const Scalar f = s * e(i);
        const Scalar b = c * e(i);
        // Plain sqrt rather than hypot: entries are O(matrix norm), far from
        // overflow, and this is the innermost loop.
        r = std::sqrt(f * f + g * g);
        e(i + 1) = r;
        if (r == Scalar(0)) {
          d(i + 1) -= p;
          e(m) = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + Scalar(2) * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        rotate_columns(basis, i, c, s);
      }
      if (underflow) {
        continue;
      }
      d(l) -= p;
      e(l) = g;
      e(m) = 0;
    } while (m != l);
  }
}

template <typename Scalar, typename Basis>
void sort_ascending(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d, Basis& basis) {
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Eigen::Index k;
    d.tail(n - i).minCoeff(&k);
    k += i;
    if (k != i) {
      std::swap(d(i), d(k));
      basis.col(i).swap(basis.col(k));
    }
  }
}

}  // namespace detail

// Full eigendecomposition of a real symmetric matrix: Householder
// tridiagonalization followed by implicit-shift QL.
template <typename Derived>
Spectrum<typename Derived::Scalar> eig_sym(const Eigen::MatrixBase<Derived>& m,
                                           const EigenSolverOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  Tridiagonal<Scalar> tri = tridiagonalize(m);
  Spectrum<Scalar> spec;
  spec.eigenvectors = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  if (n > 1) {
    spec.eigenvectors.applyOnTheLeft(tri.householder_q());
  }
  spec.eigenvalues = tri.diagonal;
  detail::implicit_ql(spec.eigenvalues, tri.subdiagonal, spec.eigenvectors, options);
  detail::sort_ascending(spec.eigenvalues, spec.eigenvectors);
  return spec;
}

// Eigenvalues of m and overlaps of the columns of `vectors` with its
// eigenvectors. Costs O(n^2 k) beyond the reduction instead of O(n^3).
template <typename Derived, typename VDerived>
ProjectedSpectrum<typename Derived::Scalar> eig_sym_projected(const Eigen::MatrixBase<Derived>& m,
                                                              const Eigen::MatrixBase<VDerived>& vectors,
                                                              const EigenSolverOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (vectors.rows() != n) {
    throw DomainError("eig_sym_projected: vector length does not match matrix order");
  }
  Tridiagonal<Scalar> tri = tridiagonalize(m);
  // Rows of `overlaps` start as (Q^T u_r)^T and are rotated like eigenvector
  // coordinates.
  ProjectedSpectrum<Scalar> out;
  out.overlaps = vectors.transpose();
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index rem = n - k - 1;
    const Scalar tau = tri.coeffs(k);
    if (tau == Scalar(0)) {
      continue;
    }
    auto rows = out.overlaps.rightCols(rem);
    const auto essential = tri.reflectors.col(k).tail(rem - 1);
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      const Scalar proj = tau * (rows(r, 0) + rows.row(r).tail(rem - 1).dot(essential.transpose()));
      rows(r, 0) -= proj;
      rows.row(r).tail(rem - 1) -= proj * essential.transpose();
    }
  }
  out.eigenvalues = tri.diagonal;
  detail::implicit_ql(out.eigenvalues, tri.subdiagonal, out.overlaps, options);
  detail::sort_ascending(out.eigenvalues, out.overlaps);
  return out;
}

}  // namespace ptx
