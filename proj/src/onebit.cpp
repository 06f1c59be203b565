#include "spherebit/onebit.hpp"

#include <cmath>
#include <stdexcept>

#include "spherebit/discrepancy.hpp"

namespace spherebit {

std::string to_string(PointSetMeta::Method m) {
  switch (m) {
    case PointSetMeta::Method::random: return "random";
    case PointSetMeta::Method::jittered: return "jittered";
    case PointSetMeta::Method::file: return "file";
    case PointSetMeta::Method::minimized: return "minimized";
  }
  return "file";
}

PointSetMeta::Method method_from_string(const std::string& s) {
  if (s == "random") return PointSetMeta::Method::random;
  if (s == "jittered") return PointSetMeta::Method::jittered;
  if (s == "file") return PointSetMeta::Method::file;
  if (s == "minimized") return PointSetMeta::Method::minimized;
  throw std::invalid_argument("unknown point-set method: " + s);
}

PointSet::PointSet(int d, std::vector<double> flat, PointSetMeta meta)
    : d_(d), flat_(std::move(flat)), meta_(std::move(meta)) {
  if (d_ < 1) throw std::invalid_argument("PointSet: requires d >= 1");
  const auto width = static_cast<std::size_t>(d_) + 1;
  if (flat_.empty() || flat_.size() % width != 0)
    throw std::invalid_argument("PointSet: requires N >= 1 rows of d+1 values");
  N_ = static_cast<std::int64_t>(flat_.size() / width);
  // Route every row through the Point invariants (renormalize, reject junk).
  for (std::int64_t k = 0; k < N_; ++k) {
    const auto row = static_cast<std::size_t>(k) * width;
    Point p(std::vector<double>(flat_.begin() + static_cast<std::ptrdiff_t>(row),
                                flat_.begin() + static_cast<std::ptrdiff_t>(row + width)));
    std::copy(p.coords().begin(), p.coords().end(),
              flat_.begin() + static_cast<std::ptrdiff_t>(row));
  }
}

PointSet PointSet::from_points(const std::vector<Point>& pts,
                               PointSetMeta meta) {
  if (pts.empty())
    throw std::invalid_argument("PointSet: requires N >= 1 points");
  const int d = pts.front().dim();
  std::vector<double> flat;
  flat.reserve(pts.size() * (static_cast<std::size_t>(d) + 1));
  for (const Point& p : pts) {
    if (p.dim() != d)
      throw std::invalid_argument("PointSet: mixed dimensions");
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return PointSet(d, std::move(flat), std::move(meta));
}

Point PointSet::point_at(std::int64_t k) const {
  const auto sp = point(k);
  return Point(std::vector<double>(sp.begin(), sp.end()));
}

BitVector sign_embed(const PointSet& Z, const Point& x) {
  if (x.dim() != Z.dim())
    throw std::invalid_argument("sign_embed: dimension mismatch");
  BitVector out;
  out.signs.resize(static_cast<std::size_t>(Z.size()));
  for (std::int64_t k = 0; k < Z.size(); ++k)
    out.signs[static_cast<std::size_t>(k)] =
        static_cast<std::int8_t>(sign_of(geom::dot_span(Z.point(k), x.span())));
  return out;
}

double hamming(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming: length mismatch");
  if (a.size() == 0) throw std::invalid_argument("hamming: empty vectors");
  std::int64_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.signs[i] != b.signs[i]) ++diff;
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

WedgeDescriptor::WedgeDescriptor(Point x_, Point y_)
    : x(std::move(x_)), y(std::move(y_)) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("WedgeDescriptor: dimension mismatch");
}

bool WedgeDescriptor::degenerate() const {
  return std::abs(dot(x, y)) >= 1.0 - 1e-15;
}

bool wedge_contains(const WedgeDescriptor& w, const Point& z) {
  if (z.dim() != w.x.dim())
    throw std::invalid_argument("wedge_contains: dimension mismatch");
  return sign_of(geom::dot_span(z.span(), w.x.span())) !=
         sign_of(geom::dot_span(z.span(), w.y.span()));
}

namespace onebit_detail {

std::int64_t wedge_count(const std::vector<double>& flat, int d,
                         std::span<const double> x,
                         std::span<const double> y) {
  const auto width = static_cast<std::size_t>(d) + 1;
  const std::size_t n = flat.size() / width;
  std::int64_t count = 0;
  const double* row = flat.data();
  for (std::size_t k = 0; k < n; ++k, row += width) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      sx += row[i] * x[i];
      sy += row[i] * y[i];
    }
    count += (sx >= 0.0) != (sy >= 0.0);
  }
  return count;
}

double delta_span(const std::vector<double>& flat, int d,
                  std::span<const double> x, std::span<const double> y) {
  const auto width = static_cast<std::size_t>(d) + 1;
  const auto n = static_cast<double>(flat.size() / width);
  const std::int64_t count = wedge_count(flat, d, x, y);
  return static_cast<double>(count) / n - geom::geodesic_span(x, y);
}

}  // namespace onebit_detail

double delta(const PointSet& Z, const Point& x, const Point& y) {
  if (x.dim() != Z.dim() || y.dim() != Z.dim())
    throw std::invalid_argument("delta: dimension mismatch");
  return onebit_detail::delta_span(Z.flat(), Z.dim(), x.span(), y.span());
}

double slice_discrepancy(const PointSet& Z, const Point& x, const Point& y) {
  if (x.dim() != Z.dim() || y.dim() != Z.dim())
    throw std::invalid_argument("slice_discrepancy: dimension mismatch");
  std::int64_t count = 0;
  for (std::int64_t k = 0; k < Z.size(); ++k) {
    const auto z = Z.point(k);
    if (geom::dot_span(z, x.span()) > 0.0 && geom::dot_span(z, y.span()) < 0.0)
      ++count;
  }
  return static_cast<double>(count) / static_cast<double>(Z.size()) -
         0.5 * geodesic_distance(x, y);
}

PointSet symmetrize(const PointSet& Z) {
  std::vector<double> flat = Z.flat();
  flat.reserve(2 * flat.size());
  for (std::size_t i = 0, n = Z.flat().size(); i < n; ++i)
    flat.push_back(-Z.flat()[i]);
  PointSetMeta meta = Z.meta();
  return PointSet(Z.dim(), std::move(flat), std::move(meta));
}

RipCheckResult rip_sup_check(const PointSet& Z, double delta_target,
                             std::int64_t estimator_budget,
                             RandomStream& rng) {
  if (!(delta_target > 0.0 && delta_target <= 1.0))
    throw std::invalid_argument("rip_sup_check: requires 0 < delta_target <= 1");
  DiscrepancyReport rep = sup_wedge_lower(Z, estimator_budget, rng);
  RipCheckResult out;
  out.sup_lower_bound = rep.value;
  out.evaluations = rep.samples.value_or(0);
  out.passes = rep.value < delta_target;
  if (!out.passes) out.witness = rep.witness;
  return out;
}

}  // namespace spherebit
