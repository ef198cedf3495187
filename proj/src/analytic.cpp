#include "ptx/analytic.hpp"

#include "ptx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptx {

namespace {

using std::numbers::pi;
using Cd = std::complex<double>;

void require_positive(double y, const char* where) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError(std::string(where) + ": argument must be positive and finite");
  }
}

double relative_gap(Cd closed, Cd quad) { return std::abs(closed - quad) / std::abs(quad); }

Regime small_regime(double smallness) {
  return smallness <= kAsymptoticRegimeLimit ? Regime::asymptotic : Regime::asymptotic_outside;
}

// Even integrand g(x) sqrt(1-x^2) over [-1, 1] as 2 int_0^{pi/2} cos^2 g(sin).
template <typename G>
double even_semicircle_integral(G g, const QuadratureOptions& options) {
  auto f = [&](double theta) {
    const double c = std::cos(theta);
    return c * c * g(std::sin(theta));
  };
  return 2.0 * integrate(f, 0.0, 0.5 * pi, options).value;
}

}  // namespace

std::string to_string(IntegralId id) {
  switch (id) {
    case IntegralId::I1:
      return "I1";
    case IntegralId::I2:
      return "I2";
    case IntegralId::I3:
      return "I3";
    case IntegralId::I4:
      return "I4";
  }
  return "?";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::exact:
      return "exact";
    case Regime::asymptotic:
      return "asymptotic";
    case Regime::asymptotic_outside:
      return "asymptotic_outside_regime";
  }
  return "?";
}

std::complex<double> integral_I1(Cd z) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= 1.0) {
    throw DomainError("integral_I1: z lies on the branch cut [-1, 1]");
  }
  return pi * (z - std::sqrt(z + 1.0) * std::sqrt(z - 1.0));
}

double integral_I2(double y) {
  require_positive(y, "integral_I2");
  return pi / (2.0 * y * y * y * std::sqrt(1.0 + y * y));
}

double integral_I4(double y) {
  require_positive(y, "integral_I4");
  // sqrt(1+y^2) - y written without cancellation.
  return (pi / y) / (std::sqrt(1.0 + y * y) + y);
}

double integral_I3_identity(double y) { return integral_I4(y) - y * y * integral_I2(y); }

Cd integral_I1_small(Cd z) {
  if (z.imag() == 0.0) {
    throw DomainError("integral_I1_small: needs Im z != 0");
  }
  return {0.0, z.imag() > 0.0 ? -pi : pi};
}

double integral_I2_small(double y) {
  require_positive(y, "integral_I2_small");
  return pi / (2.0 * y * y * y);
}

double integral_I3_small(double y) {
  require_positive(y, "integral_I3_small");
  return pi / (2.0 * y);
}

double integral_I4_small(double y) {
  require_positive(y, "integral_I4_small");
  return pi / y;
}

Cd integral_I1_quadrature(Cd z, const QuadratureOptions& options) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= 1.0) {
    throw DomainError("integral_I1_quadrature: z lies on the branch cut [-1, 1]");
  }
  auto f = [z](double theta) {
    const double c = std::cos(theta);
    return Cd(c * c) / (z - std::sin(theta));
  };
  const double peak = std::asin(std::clamp(z.real(), -1.0, 1.0));
  return integrate(f, -0.5 * pi, 0.5 * pi, options, {peak}).value;
}

double integral_I2_quadrature(double y, const QuadratureOptions& options) {
  require_positive(y, "integral_I2_quadrature");
  const double y2 = y * y;
  return even_semicircle_integral(
      [y2](double x) {
        const double d = x * x + y2;
        return 1.0 / (d * d);
      },
      options);
}

double integral_I3_quadrature(double y, const QuadratureOptions& options) {
  require_positive(y, "integral_I3_quadrature");
  const double y2 = y * y;
  return even_semicircle_integral(
      [y2](double x) {
        const double d = x * x + y2;
        return x * x / (d * d);
      },
      options);
}

double integral_I4_quadrature(double y, const QuadratureOptions& options) {
  require_positive(y, "integral_I4_quadrature");
  const double y2 = y * y;
  return even_semicircle_integral([y2](double x) { return 1.0 / (x * x + y2); }, options);
}

IntegralValue verify_I1(Cd z) {
  const Cd closed = integral_I1(z);
  const Cd quad = integral_I1_quadrature(z);
  return {IntegralId::I1, z, closed, quad, relative_gap(closed, quad), Regime::exact};
}

IntegralValue verify_I1_small(Cd z) {
  const Cd closed = integral_I1_small(z);
  const Cd quad = integral_I1_quadrature(z);
  return {IntegralId::I1, z, closed, quad, relative_gap(closed, quad), small_regime(std::abs(z))};
}

std::array<IntegralValue, 3> integrals_I2_I3_I4(double y) {
  require_positive(y, "integrals_I2_I3_I4");
  const double q2 = integral_I2_quadrature(y);
  const double q3 = integral_I3_quadrature(y);
  const double q4 = integral_I4_quadrature(y);
  const double c2 = integral_I2(y);
  const double c3 = integral_I3_small(y);
  const double c4 = integral_I4(y);
  return {IntegralValue{IntegralId::I2, y, c2, q2, relative_gap(c2, q2), Regime::exact},
          IntegralValue{IntegralId::I3, y, c3, q3, relative_gap(c3, q3), small_regime(y)},
          IntegralValue{IntegralId::I4, y, c4, q4, relative_gap(c4, q4), Regime::exact}};
}

std::array<IntegralValue, 2> integrals_I2_I4_small(double y) {
  require_positive(y, "integrals_I2_I4_small");
  const double q2 = integral_I2_quadrature(y);
  const double q4 = integral_I4_quadrature(y);
  const double c2 = integral_I2_small(y);
  const double c4 = integral_I4_small(y);
  return {IntegralValue{IntegralId::I2, y, c2, q2, relative_gap(c2, q2), small_regime(y)},
          IntegralValue{IntegralId::I4, y, c4, q4, relative_gap(c4, q4), small_regime(y)}};
}

AnalyticMoments table1_moments(double v_k, double v_kp, const ReservoirParams& params) {
  if (!(v_k > 0.0) || !(v_kp > 0.0)) {
    throw DomainError("table1_moments: coupling scales must be positive");
  }
  params.validate();
  const double rho0 = params.level_density();
  const double gamma = params.gamma;
  const double vk2 = v_k * v_k;
  const double pair = vk2 * v_kp * v_kp;

  AnalyticMoments m;
  m.diagonal_mean = {0.0, -pi * vk2 * rho0};
  m.diagonal_re_sd = m.diagonal_im_sd = std::sqrt(2.0 * pi * vk2 * vk2 * rho0 / gamma);
  m.off_re_sd = m.off_im_sd = std::sqrt(pi * pair * rho0 / gamma);
  m.off_abs2_mean = m.off_abs2_sd = 2.0 * pi * pair * rho0 / gamma;
  m.off_square_mean = {-pi * pair * rho0 / params.band_edge(), 0.0};
  m.off_square_re_sd = m.off_square_im_sd = 2.0 * pi * pair * rho0 / gamma;
  return m;
}

}  // namespace ptx
