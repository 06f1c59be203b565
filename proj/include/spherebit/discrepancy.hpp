// discrepancy.hpp -- discrepancy engines: exact L2 values through the two
// invariance identities, Monte-Carlo L2 estimation, a certified lower bound
// for the sup over wedges, and an epsilon-approximating-family upper bound.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spherebit/onebit.hpp"

namespace spherebit {

enum class RegionFamily { wedge, cap, slice };
enum class ReportMode { exact_stolarsky, monte_carlo, sup_lower, sup_net_upper };

std::string to_string(RegionFamily f);
std::string to_string(ReportMode m);

struct DiscrepancyReport {
  RegionFamily family = RegionFamily::wedge;
  ReportMode mode = ReportMode::exact_stolarsky;
  double value = 0.0;
  std::optional<double> std_error;          // Monte-Carlo modes only
  std::optional<std::int64_t> samples;      // MC pairs / search evaluations
  std::optional<std::pair<Point, Point>> witness;
};

// ||delta_Z||_2^2 for wedges, evaluated from the identity
//   ||delta_Z||_2^2 = (1/N^2) sum_{i,j} (1/2 - d(z_i,z_j))^2 - (V_d - 1/4).
double l2_wedge_exact(const PointSet& Z);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Direct estimator of the double integral of delta_Z(x,y)^2 over M uniform
// pairs. Deterministic given (Z, M, stream): work is cut into fixed chunks
// with split substreams, so the thread count never changes the result.
McEstimate l2_wedge_montecarlo(const PointSet& Z, std::int64_t M,
                               const RandomStream& rng, int threads = 0);

// Squared cap L2 discrepancy from the invariance identity:
//   D^2 = c_d (U_d - (1/N^2) sum_{i,j} |z_i - z_j|).
double l2_cap_exact(const PointSet& Z);

// Certified lower bound on sup |delta_Z|: the best of (a) random pairs,
// (b) wedges whose boundary is pushed near points of Z, (c) local ascent
// from the best candidates. Runs in fixed-size rounds, so on the same
// stream a larger budget evaluates a superset of candidates.
DiscrepancyReport sup_wedge_lower(const PointSet& Z, std::int64_t budget,
                                  const RandomStream& rng);

// The epsilon-approximating family for spherical wedges: a greedy
// farthest-point gamma-net with gamma = Omega eps / (4 omega), together
// with the interior/exterior wedges over net pairs.
class ApproxFamily {
 public:
  static ApproxFamily build(int d, double epsilon, int threads = 0);

  int dim() const { return d_; }
  double epsilon() const { return epsilon_; }
  double gamma() const { return gamma_; }
  std::int64_t net_size() const { return net_count_; }
  const std::vector<double>& net_flat() const { return net_; }
  Point net_point(std::int64_t i) const;
  // 2 |net|^2: interior and exterior wedges over all net pairs.
  std::int64_t family_size() const { return 2 * net_count_ * net_count_; }
  // Largest probe-to-net distance seen during validation (<= gamma).
  double covering_radius_estimate() const { return covering_estimate_; }

  // Measures of the interior / exterior wedge regions for net pairs at
  // inner product t, by 1-D quadrature over the belt construction
  // (absolute tolerance 1e-10).
  double interior_measure(double t) const;
  double exterior_measure(double t) const;

  // Index of the net point nearest to x.
  std::int64_t nearest(const Point& x) const;

 private:
  ApproxFamily() = default;
  int d_ = 0;
  double epsilon_ = 0.0;
  double gamma_ = 0.0;
  std::int64_t net_count_ = 0;
  std::vector<double> net_;  // row-major (d+1 per row)
  double covering_estimate_ = 0.0;
};

// True upper bound for sup |delta_Z|: max |D(Z, Q)| over the finite family
// plus epsilon. The scan runs on interpolated measures and every candidate
// near the max is re-evaluated with exact quadrature before reporting.
DiscrepancyReport sup_wedge_net_upper(const PointSet& Z,
                                      const ApproxFamily& family,
                                      int threads = 0);
DiscrepancyReport sup_wedge_net_upper(const PointSet& Z, double epsilon,
                                      int threads = 0);

namespace disc_detail {

// sigma({p : p.x >= s1 and p.y <= s2}) for unit x, y with x.y = t,
// |t| < 1. One-dimensional quadrature; integrand kinks are split away.
double lune_measure(int d, double t, double s1, double s2, double abs_tol = 1e-10);

// Cached V_d / U_d / constants per dimension.
double cached_Vd(int d);
double cached_Ud(int d);

}  // namespace disc_detail

}  // namespace spherebit
