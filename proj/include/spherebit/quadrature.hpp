// quadrature.hpp -- adaptive Gauss-Kronrod integration on an interval.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherebit {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated local error estimates
  std::size_t evaluations = 0;
};

// Thrown when the requested absolute tolerance cannot be certified.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double achieved, double requested)
      : std::runtime_error("quadrature did not converge: achieved " +
                           std::to_string(achieved) + ", requested " +
                           std::to_string(requested)),
        achieved_tolerance(achieved),
        requested_tolerance(requested) {}
  double achieved_tolerance;
  double requested_tolerance;
};

namespace quadrature_detail {

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-index nodes.
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double* value, double* error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_k = kWeightsK[7] * fc;
  double result_g = kWeightsG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kNodes[i];
    const double fsum = f(c - x) + f(c + x);
    result_k += kWeightsK[i] * fsum;
    if (i % 2 == 1) result_g += kWeightsG[i / 2] * fsum;
  }
  *value = result_k * h;
  *error = std::abs((result_k - result_g) * h);
}

}  // namespace quadrature_detail

// Adaptive bisection with a GK15 rule on each subinterval. Subintervals are
// accepted once the local error estimate fits their share of abs_tol; throws
// QuadratureError when the budget is exhausted first.
template <class F>
QuadratureResult integrate(const F& f, double a, double b,
                           double abs_tol = 1e-12, int max_depth = 52,
                           std::size_t max_evaluations = 4'000'000) {
  struct Interval {
    double a, b;
    int depth;
  };
  if (!(b > a)) {
    if (a == b) return {0.0, 0.0, 0};
    throw std::invalid_argument("integrate: requires a <= b");
  }
  const double total_len = b - a;
  QuadratureResult out;
  std::vector<Interval> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    double v = 0.0, e = 0.0;
    quadrature_detail::gk15(f, iv.a, iv.b, &v, &e);
    out.evaluations += 15;
    const double local_budget = abs_tol * (iv.b - iv.a) / total_len;
    if (e <= local_budget || e <= 1e-17 * std::abs(v) ||
        iv.depth >= max_depth || out.evaluations >= max_evaluations) {
      out.value += v;
      out.error += e;
      continue;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, mid, iv.depth + 1});
    stack.push_back({mid, iv.b, iv.depth + 1});
  }
  if (out.error > abs_tol) throw QuadratureError(out.error, abs_tol);
  return out;
}

// Same rule over an interval split at interior breakpoints (used when the
// integrand has known kinks).
template <class F>
QuadratureResult integrate_split(const F& f, std::vector<double> breakpoints,
                                 double abs_tol = 1e-12) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_split: need at least 2 points");
  QuadratureResult out;
  const std::size_t pieces = breakpoints.size() - 1;
  for (std::size_t i = 0; i < pieces; ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    QuadratureResult piece = integrate(f, breakpoints[i], breakpoints[i + 1],
                                       abs_tol / static_cast<double>(pieces));
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
  }
  return out;
}

}  // namespace spherebit
