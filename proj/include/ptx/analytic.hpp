#pragma once

#include "ptx/goe.hpp"
#include "ptx/quadrature.hpp"

#include <array>
#include <complex>
#include <string>

namespace ptx {

// Semicircle integrals over x in [-1, 1] with weight sqrt(1 - x^2):
//   I1(z) = int sqrt(1-x^2) / (z - x)
//   I2(y) = int sqrt(1-x^2) / (x^2 + y^2)^2
//   I3(y) = int x^2 sqrt(1-x^2) / (x^2 + y^2)^2
//   I4(y) = int sqrt(1-x^2) / (x^2 + y^2)

enum class IntegralId { I1, I2, I3, I4 };

enum class Regime {
  exact,                // closed form valid for every argument
  asymptotic,           // leading small-argument form, inside its validity regime
  asymptotic_outside,   // leading small-argument form, argument too large
};

std::string to_string(IntegralId id);
std::string to_string(Regime regime);

// Small-argument forms are reported as inside their regime up to this value
// of |z| (I1) or y (I2..I4); their relative error there is below 1%.
inline constexpr double kAsymptoticRegimeLimit = 0.004;

struct IntegralValue {
  IntegralId id;
  std::complex<double> argument;
  std::complex<double> closed_form;
  std::complex<double> quadrature;
  double discrepancy;  // |closed - quad| / |quad|
  Regime regime;
};

// pi (z - sqrt(z+1) sqrt(z-1)), principal square roots. Throws for real z in
// [-1, 1].
std::complex<double> integral_I1(std::complex<double> z);
double integral_I2(double y);
double integral_I4(double y);
// I3 = I4 - y^2 I2 holds identically; exposed for cross-checks only.
double integral_I3_identity(double y);

// Leading small-argument forms.
std::complex<double> integral_I1_small(std::complex<double> z);  // -i pi sign(Im z)
double integral_I2_small(double y);                              // pi / (2 y^3)
double integral_I3_small(double y);                              // pi / (2 y)
double integral_I4_small(double y);                              // pi / y

// Adaptive Gauss-Kronrod after x = sin(theta), which removes the square-root
// endpoint behaviour.
std::complex<double> integral_I1_quadrature(std::complex<double> z, const QuadratureOptions& options = {});
double integral_I2_quadrature(double y, const QuadratureOptions& options = {});
double integral_I3_quadrature(double y, const QuadratureOptions& options = {});
double integral_I4_quadrature(double y, const QuadratureOptions& options = {});

IntegralValue verify_I1(std::complex<double> z);
IntegralValue verify_I1_small(std::complex<double> z);
// Exact I2 and I4 and the small-y I3 against quadrature.
std::array<IntegralValue, 3> integrals_I2_I3_I4(double y);
// Small-y forms of I2 and I4 against quadrature.
std::array<IntegralValue, 2> integrals_I2_I4_small(double y);

// Large-N self-energy moments at E = 0 for (rho0)^-1 << Gamma << E_m.
struct AnalyticMoments {
  std::complex<double> diagonal_mean;  // <w_kk>
  double diagonal_re_sd = 0.0;
  double diagonal_im_sd = 0.0;
  double off_re_sd = 0.0;
  double off_im_sd = 0.0;
  double off_abs2_mean = 0.0;
  double off_abs2_sd = 0.0;
  std::complex<double> off_square_mean;  // <w_kk'^2>
  double off_square_re_sd = 0.0;
  double off_square_im_sd = 0.0;
};

AnalyticMoments table1_moments(double v_k, double v_kp, const ReservoirParams& params);

}  // namespace ptx
