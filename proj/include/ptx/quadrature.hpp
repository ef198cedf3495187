#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <queue>
#include <vector>

namespace ptx {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

template <typename Value>
struct QuadratureResult {
  Value value{};
  double error_estimate = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> z) { return std::abs(z); }

template <typename Value>
struct Segment {
  double a;
  double b;
  Value value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename Value, typename F>
Segment<Value> kronrod15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Value fc = f(centre);
  Value kronrod = kKronrodWeights[7] * fc;
  Value gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Value sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) {
      gauss += kGaussWeights[j / 2] * sum;
    }
  }
  return {a, b, kronrod * half, magnitude((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over [a, b]. Optional
// interior breakpoints (peaks, kinks) seed the initial partition. Stops when
// the summed error estimate drops below max(abs_tol, rel_tol |I|) or the
// interval budget is exhausted (converged = false).
template <typename F>
auto integrate(F f, double a, double b, const QuadratureOptions& options = {},
               std::initializer_list<double> breakpoints = {}) {
  using Value = decltype(f(a));
  using Segment = detail::Segment<Value>;

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Segment> heap;
  Value total{};
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = detail::kronrod15<Value>(f, cuts[i], cuts[i + 1]);
    total += s.value;
    error += s.error;
    heap.push(s);
  }

  QuadratureResult<Value> result;
  while (true) {
    const double target = std::max(options.abs_tol, options.rel_tol * detail::magnitude(total));
    if (error <= target) {
      result.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= options.max_intervals) {
      break;
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Segment left = detail::kronrod15<Value>(f, worst.a, mid);
    const Segment right = detail::kronrod15<Value>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the round-off accumulated by the running updates.
  Value resummed{};
  double err = 0.0;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    resummed += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  result.value = resummed;
  result.error_estimate = err;
  return result;
}

}  // namespace ptx
