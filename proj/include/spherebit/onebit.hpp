// onebit.hpp -- the sign-linear one-bit embedding, Hamming metric, wedge and
// slice geometry, and the pointwise embedding error delta.
//
// sgn(0) := +1 everywhere. The underlying measure-theoretic statements hold
// up to sets of measure zero, so deterministic code just needs one fixed
// convention; tests avoid exact-zero inner products except where the
// convention itself is under test.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherebit/geometry.hpp"
#include "spherebit/rng.hpp"

namespace spherebit {

struct PointSetMeta {
  enum class Method { random, jittered, file, minimized };
  Method method = Method::file;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> partition_cells;
};

std::string to_string(PointSetMeta::Method m);
PointSetMeta::Method method_from_string(const std::string& s);

// An N-point subset of S^d, stored row-major for tight inner loops. Rows are
// validated and renormalized through the Point invariants.
class PointSet {
 public:
  PointSet(int d, std::vector<double> flat, PointSetMeta meta = {});
  static PointSet from_points(const std::vector<Point>& pts,
                              PointSetMeta meta = {});

  int dim() const { return d_; }
  std::int64_t size() const { return N_; }
  std::span<const double> point(std::int64_t k) const {
    const auto w = static_cast<std::size_t>(d_) + 1;
    return std::span<const double>(flat_).subspan(
        static_cast<std::size_t>(k) * w, w);
  }
  Point point_at(std::int64_t k) const;
  const std::vector<double>& flat() const { return flat_; }
  const PointSetMeta& meta() const { return meta_; }
  void set_meta(PointSetMeta m) { meta_ = std::move(m); }

 private:
  int d_;
  std::int64_t N_;
  std::vector<double> flat_;
  PointSetMeta meta_;
};

// Image of a point under the sign-linear map: one sign per z_j.
struct BitVector {
  std::vector<std::int8_t> signs;  // entries exactly -1 or +1
  std::size_t size() const { return signs.size(); }
};

inline int sign_of(double t) { return t >= 0.0 ? 1 : -1; }

// signs[j] = sgn(z_j . x).
BitVector sign_embed(const PointSet& Z, const Point& x);

// Fraction of coordinates in which a and b differ; range [0, 1].
double hamming(const BitVector& a, const BitVector& b);

// The wedge W_xy: directions z whose hyperplane separates x and y.
struct WedgeDescriptor {
  Point x, y;
  WedgeDescriptor(Point x_, Point y_);
  // x == +-y (up to roundoff); the wedge is empty or almost-everything.
  bool degenerate() const;
};

bool wedge_contains(const WedgeDescriptor& w, const Point& z);

// delta_Z(x,y) = (#{k : z_k in W_xy} / N) - d(x,y)
//             = hamming(sign_embed(Z,x), sign_embed(Z,y)) - d(x,y).
double delta(const PointSet& Z, const Point& x, const Point& y);

// Same quantity for the slice S_xy = {z : z.x > 0, z.y < 0}, whose measure
// is d(x,y)/2.
double slice_discrepancy(const PointSet& Z, const Point& x, const Point& y);

// Z* = Z union (-Z), size 2N.
PointSet symmetrize(const PointSet& Z);

struct RipCheckResult {
  bool passes;
  double sup_lower_bound;
  std::int64_t evaluations;
  std::optional<std::pair<Point, Point>> witness;  // present when it fails
};

// Runs the certified-lower-bound sup search against a target. "passes" only
// says the search could not push the lower bound past the target; it is
// evidence, not a certificate of the sup itself.
RipCheckResult rip_sup_check(const PointSet& Z, double delta_target,
                             std::int64_t estimator_budget, RandomStream& rng);

namespace onebit_detail {

// Count of points of the flat (N x (d+1)) array separated by (x, y).
std::int64_t wedge_count(const std::vector<double>& flat, int d,
                         std::span<const double> x, std::span<const double> y);

double delta_span(const std::vector<double>& flat, int d,
                  std::span<const double> x, std::span<const double> y);

}  // namespace onebit_detail

}  // namespace spherebit
