#include "spherebit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spherebit/quadrature.hpp"

namespace spherebit {

namespace geom {

double dot_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double geodesic_span(std::span<const double> a, std::span<const double> b) {
  const double t = std::clamp(dot_span(a, b), -1.0, 1.0);
  return std::acos(t) / M_PI;
}

double euclidean_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

bool normalize(std::span<double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  if (s < 1e-24) return false;
  const double inv = 1.0 / std::sqrt(s);
  for (double& c : v) c *= inv;
  return true;
}

void fill_uniform(int d, RandomStream& rng, std::span<double> out) {
  do {
    for (int i = 0; i <= d; ++i) out[i] = rng.normal();
  } while (!normalize(out));
}

}  // namespace geom

Point::Point(std::vector<double> coords) : c_(std::move(coords)) {
  if (c_.size() < 2)
    throw std::invalid_argument("Point: ambient dimension must be >= 2");
  double s = 0.0;
  for (double v : c_) s += v * v;
  const double norm = std::sqrt(s);
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("Point: norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  for (double& v : c_) v /= norm;
}

Point Point::axis(int d, int k) {
  if (d < 1 || k < 0 || k > d)
    throw std::invalid_argument("Point::axis: bad dimension or index");
  std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
  c[static_cast<std::size_t>(k)] = 1.0;
  return Point(std::move(c));
}

Point Point::unchecked(std::vector<double> unit_coords) {
  return Point(std::move(unit_coords), UncheckedTag{});
}

Point operator-(const Point& p) {
  std::vector<double> c = p.coords();
  for (double& v : c) v = -v;
  return Point::unchecked(std::move(c));
}

namespace {

void check_same_dim(const Point& x, const Point& y, const char* who) {
  if (x.dim() != y.dim())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

double dot(const Point& x, const Point& y) {
  check_same_dim(x, y, "dot");
  return geom::dot_span(x.span(), y.span());
}

double geodesic_distance(const Point& x, const Point& y) {
  check_same_dim(x, y, "geodesic_distance");
  return geom::geodesic_span(x.span(), y.span());
}

double euclidean_distance(const Point& x, const Point& y) {
  check_same_dim(x, y, "euclidean_distance");
  return geom::euclidean_span(x.span(), y.span());
}

double surface_area(int d) {
  if (d < 1) throw std::invalid_argument("surface_area: requires d >= 1");
  const double half = 0.5 * (d + 1);
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

double omega_ratio(int d) {
  if (d < 1) throw std::invalid_argument("omega_ratio: requires d >= 1");
  return std::tgamma(0.5 * (d + 1)) /
         (std::tgamma(0.5 * d) * std::sqrt(M_PI));
}

double sin_power_integral(int m, double x) {
  if (m < 0) throw std::invalid_argument("sin_power_integral: m >= 0");
  // S_0 = x, S_1 = 1 - cos x, S_m = (-cos x sin^{m-1} x + (m-1) S_{m-2}) / m.
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  double even = x;             // S_0
  double odd = 1.0 - cx;       // S_1
  if (m == 0) return even;
  if (m == 1) return odd;
  double sin_pow = sx;  // sin^1
  double result = 0.0;
  for (int k = 2; k <= m; ++k) {
    // sin_pow holds sin^{k-1}(x) here.
    double& acc = (k % 2 == 0) ? even : odd;
    acc = (-cx * sin_pow + (k - 1) * acc) / k;
    result = acc;
    sin_pow *= sx;
  }
  return result;
}

double cap_measure(double t, int d) {
  if (d < 1) throw std::invalid_argument("cap_measure: requires d >= 1");
  if (t < -1.0 || t > 1.0)
    throw std::invalid_argument("cap_measure: height outside [-1, 1]");
  // sigma{y.x >= t} = (omega/Omega) * int_0^{arccos t} sin^{d-1}(phi) dphi.
  return omega_ratio(d) * sin_power_integral(d - 1, std::acos(t));
}

double inverse_cap_measure(double m, int d) {
  if (m < 0.0 || m > 1.0)
    throw std::invalid_argument("inverse_cap_measure: measure outside [0, 1]");
  if (m == 0.0) return 1.0;
  if (m == 1.0) return -1.0;
  // cap_measure is continuous and strictly decreasing in t.
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cap_measure(mid, d) > m)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double second_moment_Vd(int d) {
  if (d < 2) throw std::invalid_argument("second_moment_Vd: requires d >= 2");
  const double scale = omega_ratio(d) / (M_PI * M_PI);
  // Tolerance on the raw integral, so the scaled result is within 1e-12.
  const auto q = integrate(
      [d](double phi) {
        return phi * phi * std::pow(std::sin(phi), d - 1);
      },
      0.0, M_PI, 1e-12 / scale);
  return scale * q.value;
}

double mean_distance_Ud(int d) {
  if (d < 2) throw std::invalid_argument("mean_distance_Ud: requires d >= 2");
  const double scale = omega_ratio(d);
  const auto q = integrate(
      [d](double phi) {
        return 2.0 * std::sin(0.5 * phi) * std::pow(std::sin(phi), d - 1);
      },
      0.0, M_PI, 1e-12 / scale);
  return scale * q.value;
}

Point uniform_point(int d, RandomStream& rng) {
  if (d < 1) throw std::invalid_argument("uniform_point: requires d >= 1");
  std::vector<double> c(static_cast<std::size_t>(d) + 1);
  geom::fill_uniform(d, rng, c);
  return Point(std::move(c));
}

SphereConstants SphereConstants::make(int d) {
  if (d < 2) throw std::invalid_argument("SphereConstants: requires d >= 2");
  SphereConstants sc;
  sc.d = d;
  sc.Omega = surface_area(d);
  sc.omega = surface_area(d - 1);
  sc.ratio = omega_ratio(d);
  sc.Vd = second_moment_Vd(d);
  sc.Ud = mean_distance_Ud(d);
  sc.cd = sc.ratio / d;
  return sc;
}

}  // namespace spherebit
