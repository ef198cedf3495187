#pragma once

#include <span>

namespace ptx {

// Chi-square family of width distributions: nu degrees of freedom, mean x0.
struct PtParams {
  double nu = 1.0;
  double x0 = 1.0;

  void validate() const;
};

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series below
// x = a + 1, Lentz continued fraction for Q above.
double regularized_gamma_p(double a, double x);

double pt_pdf(double x, const PtParams& p);
double pt_cdf(double x, const PtParams& p);

// 2 <x>^2 / (<x^2> - <x>^2), population moments.
double nu_eff(std::span<const double> samples);

// Empirical crossover nu(y) = (1 + 8.28 y^2) / (1 + 3.81 y^2), y = rho0a Gamma_a.
double crossover_curve(double y);

}  // namespace ptx
