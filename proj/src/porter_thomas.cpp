#include "ptx/porter_thomas.hpp"

#include "ptx/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ptx {

namespace {

constexpr int kMaxGammaTerms = 1000;
constexpr double kGammaEps = 1e-16;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxGammaTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw ConvergenceError("regularized_gamma_p: series did not converge");
}

// Upper tail Q(a, x) by modified Lentz evaluation of the continued fraction.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) {
      d = tiny;
    }
    c = b + an / c;
    if (std::abs(c) < tiny) {
      c = tiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw ConvergenceError("regularized_gamma_p: continued fraction did not converge");
}

}  // namespace

void PtParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("Porter-Thomas: nu must be positive");
  }
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw DomainError("Porter-Thomas: x0 must be positive");
  }
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw DomainError("regularized_gamma_p: need a > 0 and x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  if (x < a + 1.0) {
    return gamma_p_series(a, x);
  }
  return 1.0 - gamma_q_fraction(a, x);
}

double pt_pdf(double x, const PtParams& p) {
  p.validate();
  if (x < 0.0 || std::isnan(x)) {
    throw DomainError("pt_pdf: x must be non-negative");
  }
  const double half_nu = 0.5 * p.nu;
  if (x == 0.0) {
    if (p.nu < 2.0) {
      throw DomainError("pt_pdf: density diverges at x = 0 for nu < 2");
    }
    return p.nu == 2.0 ? 1.0 / p.x0 : 0.0;
  }
  const double u = half_nu * x / p.x0;
  return std::exp(std::log(half_nu / p.x0) - std::lgamma(half_nu) + (half_nu - 1.0) * std::log(u) - u);
}

double pt_cdf(double x, const PtParams& p) {
  p.validate();
  if (x < 0.0 || std::isnan(x)) {
    throw DomainError("pt_cdf: x must be non-negative");
  }
  return regularized_gamma_p(0.5 * p.nu, 0.5 * p.nu * x / p.x0);
}

double nu_eff(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw InsufficientData("nu_eff: need at least two samples");
  }
  const auto n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0.0;
  for (double x : samples) {
    var += (x - mean) * (x - mean);
  }
  var /= n;
  if (!(var > 0.0)) {
    throw InsufficientData("nu_eff: zero variance leaves the estimator undefined");
  }
  return 2.0 * mean * mean / var;
}

double crossover_curve(double y) {
  if (!(y >= 0.0)) {
    throw DomainError("crossover_curve: y must be non-negative");
  }
  if (std::isinf(y)) {
    return 8.28 / 3.81;
  }
  const double y2 = y * y;
  return (1.0 + 8.28 * y2) / (1.0 + 3.81 * y2);
}

}  // namespace ptx
