// geometry.hpp -- sphere geometry: points, metrics, surface constants and
// the distance-moment integrals everything else consumes.
//
// Conventions used throughout the library:
//   * S^d is the unit sphere in R^{d+1}; sigma is its surface measure
//     normalized to sigma(S^d) = 1.
//   * geodesic distance is normalized so antipodal points are at distance 1.
//   * Omega = unnormalized surface measure of S^d, omega = that of S^{d-1}.
#pragma once

#include <span>
#include <vector>

#include "spherebit/rng.hpp"

namespace spherebit {

// A unit vector in R^{d+1}. Renormalized on construction; inputs whose norm
// deviates from 1 by more than 1e-6 are rejected (they indicate corrupt
// data, not roundoff).
class Point {
 public:
  explicit Point(std::vector<double> coords);

  int dim() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coords() const { return c_; }
  std::span<const double> span() const { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }

  // k-th standard basis vector of R^{d+1}, as a point of S^d.
  static Point axis(int d, int k);

  // Adopts coordinates that are already unit-norm, skipping validation and
  // renormalization. For exact coordinate-level operations (negation) where
  // a renormalizing pass would perturb the last bit.
  static Point unchecked(std::vector<double> unit_coords);

  friend bool operator==(const Point& a, const Point& b) {
    return a.c_ == b.c_;
  }

 private:
  struct UncheckedTag {};
  Point(std::vector<double> coords, UncheckedTag) : c_(std::move(coords)) {}
  std::vector<double> c_;
};

Point operator-(const Point& p);

double dot(const Point& x, const Point& y);

// arccos(x.y)/pi, clamped so identical/antipodal inputs cannot leave the
// arccos domain. Range [0, 1].
double geodesic_distance(const Point& x, const Point& y);
double euclidean_distance(const Point& x, const Point& y);

// Unnormalized surface measure Omega of S^d (d >= 1).
double surface_area(int d);

// omega/Omega = Gamma((d+1)/2) / (Gamma(d/2) sqrt(pi)); satisfies
// omega/Omega <= sqrt(d / (2 pi)).
double omega_ratio(int d);

// int_0^x sin^m(t) dt, by the stable degree-lowering recurrence.
double sin_power_integral(int m, double x);

// Normalized measure of the cap {y : y.x >= t}; independent of the pole x.
double cap_measure(double t, int d);

// Inverse of cap_measure in t: the height whose cap has measure m.
double inverse_cap_measure(double m, int d);

// Second moment of the geodesic distance between two uniform points,
// V_d = E d(x,y)^2, by quadrature to 1e-12 absolute.
double second_moment_Vd(int d);

// Mean Euclidean distance U_d = E |x - y|, by quadrature to 1e-12 absolute.
double mean_distance_Ud(int d);

// Uniform point w.r.t. sigma (normalized Gaussian vector).
Point uniform_point(int d, RandomStream& rng);

struct SphereConstants {
  int d;
  double Omega;  // surface measure of S^d
  double omega;  // surface measure of S^{d-1}
  double ratio;  // omega / Omega
  double Vd;     // E d(x,y)^2
  double Ud;     // E |x - y|
  double cd;     // cap L2 discrepancy constant, ratio / d

  static SphereConstants make(int d);  // d >= 2
};

namespace geom {

// Span-based kernels for hot loops; no dimension checks.
double dot_span(std::span<const double> a, std::span<const double> b);
double geodesic_span(std::span<const double> a, std::span<const double> b);
double euclidean_span(std::span<const double> a, std::span<const double> b);
// Normalizes v in place; returns false when the norm is too small to divide.
bool normalize(std::span<double> v);
void fill_uniform(int d, RandomStream& rng, std::span<double> out);

}  // namespace geom

}  // namespace spherebit
