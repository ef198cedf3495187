#include "ptx/analytic.hpp"
#include "ptx/error.hpp"
#include "ptx/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ptx;
using std::numbers::pi;
using C = std::complex<double>;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("quadrature on known integrals") {
  const auto poly = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(poly.converged);
  CHECK(poly.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi).value == doctest::Approx(2.0).epsilon(1e-14));
  const auto osc = integrate([](double x) { return std::exp(C(0.0, x)); }, 0.0, pi);
  CHECK(std::abs(osc.value - C(0.0, 2.0)) < 1e-13);
  const auto kink = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, {0.3});
  CHECK(kink.value == doctest::Approx(0.045 + 0.245).epsilon(1e-14));
  const auto peak = integrate([](double x) { return 1e-3 / (x * x + 1e-6); }, -1.0, 1.0);
  CHECK(peak.value == doctest::Approx(2.0 * std::atan(1000.0)).epsilon(1e-12));
  QuadratureOptions tight;
  tight.max_intervals = 1;
  CHECK_FALSE(integrate([](double x) { return 1e-3 / (x * x + 1e-6); }, -1.0, 1.0, tight).converged);
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("I1 closed form") {
  CHECK(rel(integral_I1(C(0.0, 0.025)), C(0.0, pi * (0.025 - std::sqrt(1.000625)))) < 1e-14);
  CHECK(integral_I1(C(0.0, 0.025)).imag() == doctest::Approx(-3.0640).epsilon(1e-4));
  CHECK(rel(integral_I1(C(0.0, 1e-9)), C(0.0, -pi)) < 1e-8);
  CHECK(rel(integral_I1(C(0.0, -1e-9)), C(0.0, pi)) < 1e-8);
  const C z(0.0, 10.0);
  CHECK(rel(integral_I1(z), pi / (2.0 * z)) < 0.01);
  CHECK_THROWS_AS(integral_I1(C(0.5, 0.0)), DomainError);
  CHECK_NOTHROW(integral_I1(C(1.5, 0.0)));
}

TEST_CASE("I1 closed form against quadrature") {
  for (C z : {C(0.0, 0.001), C(0.0, 0.025), C(0.3, 0.2), C(-0.8, 0.05), C(0.2, -0.4), C(3.0, 0.0), C(-1.2, 0.0),
              C(0.0, 100.0)}) {
    const auto v = verify_I1(z);
    CAPTURE(z);
    CHECK(v.discrepancy < 1e-8);
    CHECK(v.regime == Regime::exact);
  }
}

TEST_CASE("I2 and I4 closed forms") {
  CHECK(integral_I2(1.0) == doctest::Approx(pi / (2.0 * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(integral_I2(1.0) == doctest::Approx(1.1107).epsilon(1e-4));
  CHECK(integral_I4(1.0) == doctest::Approx(pi * (std::sqrt(2.0) - 1.0)).epsilon(1e-14));
  CHECK(integral_I4(1.0) == doctest::Approx(1.3013).epsilon(1e-4));
  for (double y : {0.001, 0.01, 0.1, 1.0, 10.0, 1000.0}) {
    CAPTURE(y);
    CHECK(rel(integral_I2(y), integral_I2_quadrature(y)) < 1e-8);
    CHECK(rel(integral_I4(y), integral_I4_quadrature(y)) < 1e-8);
  }
  CHECK_THROWS_AS(integral_I2(0.0), DomainError);
  CHECK_THROWS_AS(integral_I4(-1.0), DomainError);
}

TEST_CASE("I3 identity against quadrature") {
  for (double y : {0.001, 0.03, 0.5, 2.0, 50.0}) {
    CAPTURE(y);
    CHECK(rel(integral_I3_identity(y), integral_I3_quadrature(y)) < 1e-10);
  }
}

TEST_CASE("small-argument forms") {
  CHECK(integral_I1_small(C(0.0, 0.001)) == C(0.0, -pi));
  CHECK(integral_I1_small(C(0.0, -0.001)) == C(0.0, pi));
  CHECK(integral_I2_small(0.01) == doctest::Approx(pi / 2e-6));
  CHECK(integral_I3_small(0.01) == doctest::Approx(157.08).epsilon(1e-4));
  CHECK(integral_I4_small(0.01) == doctest::Approx(100.0 * pi));

  // Leading corrections: I1 and I4 relative error ~ y, I3 ~ 2y, I2 ~ y^2/2.
  for (double y : {0.001, 0.004, 0.01}) {
    CAPTURE(y);
    CHECK(rel(integral_I4_small(y), integral_I4_quadrature(y)) == doctest::Approx(y).epsilon(0.05));
    CHECK(rel(integral_I3_small(y), integral_I3_quadrature(y)) == doctest::Approx(2.0 * y).epsilon(0.05));
    CHECK(rel(integral_I2_small(y), integral_I2_quadrature(y)) == doctest::Approx(0.5 * y * y).epsilon(0.05));
    CHECK(rel(integral_I1_small(C(0.0, y)), integral_I1_quadrature(C(0.0, y))) == doctest::Approx(y).epsilon(0.05));
  }
  CHECK(integral_I3_quadrature(0.01) == doctest::Approx(153.96).epsilon(1e-4));
}

TEST_CASE("regime flags") {
  CHECK(verify_I1_small(C(0.0, 0.004)).regime == Regime::asymptotic);
  CHECK(verify_I1_small(C(0.0, 0.004)).discrepancy < 0.01);
  CHECK(verify_I1_small(C(0.0, 0.05)).regime == Regime::asymptotic_outside);
  const auto row = integrals_I2_I3_I4(0.002);
  CHECK(row[0].id == IntegralId::I2);
  CHECK(row[0].regime == Regime::exact);
  CHECK(row[1].id == IntegralId::I3);
  CHECK(row[1].regime == Regime::asymptotic);
  CHECK(row[1].discrepancy < 0.01);
  CHECK(row[2].id == IntegralId::I4);
  CHECK(integrals_I2_I3_I4(0.3)[1].regime == Regime::asymptotic_outside);
  for (const auto& v : integrals_I2_I4_small(0.003)) {
    CHECK(v.regime == Regime::asymptotic);
    CHECK(v.discrepancy < 0.01);
  }
  CHECK(to_string(Regime::asymptotic_outside) == "asymptotic_outside_regime");
}

TEST_CASE("large-N self-energy moments") {
  const auto m100 = table1_moments(0.1, 0.1, {100, 0.1, 0.1});
  CHECK(m100.diagonal_mean.real() == 0.0);
  CHECK(m100.diagonal_mean.imag() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(m100.diagonal_re_sd == doctest::Approx(0.447).epsilon(1e-3));
  CHECK(m100.diagonal_im_sd == doctest::Approx(0.447).epsilon(1e-3));
  CHECK(m100.off_abs2_mean == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m100.off_abs2_sd == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m100.off_re_sd == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
  CHECK(m100.off_square_mean.real() == doctest::Approx(-pi * 1e-4 * (10.0 / (pi * 0.1)) / 2.0).epsilon(1e-12));
  CHECK(m100.off_square_mean.real() == doctest::Approx(-5.0e-3).epsilon(1e-3));

  const auto m1600 = table1_moments(0.1, 0.1, {1600, 0.1, 0.1});
  CHECK(m1600.diagonal_mean.imag() == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(m1600.diagonal_re_sd == doctest::Approx(0.894).epsilon(1e-3));
  CHECK(m1600.off_abs2_mean == doctest::Approx(0.8).epsilon(1e-12));

  CHECK_THROWS_AS(table1_moments(0.0, 0.1, {100, 0.1, 0.1}), DomainError);
}

}  // TEST_SUITE
