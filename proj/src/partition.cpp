#include "spherebit/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spherebit {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Normalized measure of the colatitude interval [0, phi].
double zone_measure(double phi, int d) {
  return cap_measure(std::cos(phi), d);
}

// Colatitude whose zone has the given measure.
double zone_boundary(double measure, int d) {
  return std::acos(inverse_cap_measure(measure, d));
}

// Euclidean diameter of a chord subtending angle w.
double chord_diameter(double w) {
  return w >= M_PI ? 2.0 : 2.0 * std::sin(0.5 * w);
}

// Draw a colatitude on [lo, hi] with density proportional to sin^{d-1}.
double sample_colatitude(double lo, double hi, int d, RandomStream& rng) {
  const int m = d - 1;
  const double s_lo = sin_power_integral(m, lo);
  const double s_hi = sin_power_integral(m, hi);
  const double target = s_lo + rng.uniform() * (s_hi - s_lo);
  double a = lo, b = hi;
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    const double mid = 0.5 * (a + b);
    if (sin_power_integral(m, mid) < target)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

Partition Partition::build(int d, std::int64_t N) {
  if (d < 1) throw std::invalid_argument("Partition: requires d >= 1");
  if (N < 1) throw std::invalid_argument("Partition: requires N >= 1");

  Partition p(d, N);
  if (d == 1) return p;  // arcs are implicit

  if (N == 1) {
    p.bands_.push_back({0.0, M_PI, 0, 1, true, nullptr});
    return p;
  }
  if (N == 2) {
    p.bands_.push_back({0.0, M_PI / 2, 0, 1, true, nullptr});
    p.bands_.push_back({M_PI / 2, M_PI, 1, 1, true, nullptr});
    return p;
  }

  const double phi_cap = zone_boundary(1.0 / static_cast<double>(N), d);

  // Ideal collar height: the d-th root of the per-cell unnormalized area.
  const double ideal_angle =
      std::pow(surface_area(d) / static_cast<double>(N), 1.0 / d);
  const auto n_collars = std::max<std::int64_t>(
      1, std::llround((M_PI - 2.0 * phi_cap) / ideal_angle));
  const double fitting_angle = (M_PI - 2.0 * phi_cap) / n_collars;

  // Ideal (fractional) cell counts per collar, then cumulative rounding so
  // the total stays exactly N - 2.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_collars), 0);
  double drift = 0.0;
  double measure_below = 1.0 / static_cast<double>(N);
  std::int64_t assigned = 0;
  for (std::int64_t i = 0; i < n_collars; ++i) {
    const double phi_hi = phi_cap + (i + 1) * fitting_angle;
    const double measure_hi =
        (i + 1 == n_collars) ? 1.0 - 1.0 / static_cast<double>(N)
                             : zone_measure(phi_hi, d);
    const double ideal = static_cast<double>(N) * (measure_hi - measure_below);
    std::int64_t m;
    if (i + 1 == n_collars) {
      m = (N - 2) - assigned;
    } else {
      m = std::max<std::int64_t>(0, std::llround(ideal + drift));
      m = std::min(m, (N - 2) - assigned);
    }
    counts[static_cast<std::size_t>(i)] = m;
    drift += ideal - static_cast<double>(m);
    assigned += m;
    measure_below = measure_hi;
  }

  // Refit collar boundaries so each collar holds exactly counts[i]/N of the
  // measure, and attach the nested angular partitions.
  p.bands_.push_back({0.0, phi_cap, 0, 1, true, nullptr});
  std::int64_t first = 1;
  double lo = phi_cap;
  double cum = 1.0;  // cells at colatitudes below `lo`
  for (std::int64_t i = 0; i < n_collars; ++i) {
    const std::int64_t m = counts[static_cast<std::size_t>(i)];
    if (m == 0) continue;
    cum += static_cast<double>(m);
    const double hi = zone_boundary(cum / static_cast<double>(N), d);
    auto angular =
        std::make_shared<const Partition>(Partition::build(d - 1, m));
    p.bands_.push_back({lo, hi, first, m, false, std::move(angular)});
    first += m;
    lo = hi;
  }
  p.bands_.push_back({lo, M_PI, N - 1, 1, true, nullptr});
  return p;
}

std::int64_t Partition::locate_span(std::span<const double> x) const {
  if (d_ == 1) {
    double theta = std::atan2(x[1], x[0]);
    if (theta < 0.0) theta += kTwoPi;
    auto idx = static_cast<std::int64_t>(
        std::floor(theta / kTwoPi * static_cast<double>(N_)));
    return std::clamp<std::int64_t>(idx, 0, N_ - 1);
  }
  const double phi =
      std::acos(std::clamp(x[static_cast<std::size_t>(d_)], -1.0, 1.0));
  // Last band with lo <= phi (bands are [lo, hi), final band closed at pi).
  std::size_t b = 0;
  {
    std::size_t lo_i = 0, hi_i = bands_.size();
    while (hi_i - lo_i > 1) {
      const std::size_t mid = (lo_i + hi_i) / 2;
      if (bands_[mid].lo <= phi)
        lo_i = mid;
      else
        hi_i = mid;
    }
    b = lo_i;
  }
  const Band& band = bands_[b];
  if (band.polar_cap) return band.first_cell;

  // Project to the equatorial S^{d-1} factor.
  double s = 0.0;
  for (int i = 0; i < d_; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  std::vector<double> u(static_cast<std::size_t>(d_), 0.0);
  if (s < 1e-30) {
    u[0] = 1.0;  // on the axis; any angular cell works, pick the first
  } else {
    const double inv = 1.0 / std::sqrt(s);
    for (int i = 0; i < d_; ++i) u[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] * inv;
  }
  return band.first_cell + band.angular->locate_span(u);
}

std::int64_t Partition::locate(const Point& x) const {
  if (x.dim() != d_)
    throw std::invalid_argument("Partition::locate: dimension mismatch");
  return locate_span(x.span());
}

void Partition::sample_span(std::int64_t cell, RandomStream& rng,
                            std::span<double> out) const {
  if (cell < 0 || cell >= N_)
    throw std::invalid_argument("Partition::sample_cell: invalid cell index");
  if (d_ == 1) {
    const double width = kTwoPi / static_cast<double>(N_);
    const double theta = (static_cast<double>(cell) + rng.uniform()) * width;
    out[0] = std::cos(theta);
    out[1] = std::sin(theta);
    return;
  }
  // Band holding this cell (few bands; linear scan is fine).
  std::size_t b = 0;
  while (b + 1 < bands_.size() &&
         cell >= bands_[b].first_cell + bands_[b].cells)
    ++b;
  const Band& band = bands_[b];

  const double phi = sample_colatitude(band.lo, band.hi, d_, rng);
  const double sphi = std::sin(phi);
  if (band.polar_cap) {
    geom::fill_uniform(d_ - 1, rng, out.subspan(0, static_cast<std::size_t>(d_)));
  } else {
    band.angular->sample_span(cell - band.first_cell, rng,
                              out.subspan(0, static_cast<std::size_t>(d_)));
  }
  for (int i = 0; i < d_; ++i) out[static_cast<std::size_t>(i)] *= sphi;
  out[static_cast<std::size_t>(d_)] = std::cos(phi);
}

Point Partition::sample_cell(std::int64_t cell, RandomStream& rng) const {
  std::vector<double> c(static_cast<std::size_t>(d_) + 1);
  sample_span(cell, rng, c);
  return Point(std::move(c));
}

double Partition::cell_diameter_bound(std::int64_t cell) const {
  if (cell < 0 || cell >= N_)
    throw std::invalid_argument("cell_diameter_bound: invalid cell index");
  if (d_ == 1) return chord_diameter(kTwoPi / static_cast<double>(N_));

  std::size_t b = 0;
  while (b + 1 < bands_.size() &&
         cell >= bands_[b].first_cell + bands_[b].cells)
    ++b;
  const Band& band = bands_[b];

  if (band.polar_cap) {
    // Cap at colatitude phi: diameter 2 sin(phi) up to the equator.
    const double angle = band.lo == 0.0 ? band.hi : M_PI - band.lo;
    return std::min(2.0, 2.0 * std::sin(std::min(angle, M_PI / 2)));
  }
  // Collar cell: ||x - x'|| <= chord(band height) + max sin(phi) * angular
  // diameter, since x = (sin(phi) u, cos(phi)).
  const double band_chord = chord_diameter(band.hi - band.lo);
  double sin_max;
  if (band.lo <= M_PI / 2 && band.hi >= M_PI / 2)
    sin_max = 1.0;
  else
    sin_max = std::max(std::sin(band.lo), std::sin(band.hi));
  const double angular =
      band.angular->cell_diameter_bound(cell - band.first_cell);
  return std::min(2.0, band_chord + sin_max * angular);
}

double Partition::max_cell_diameter_bound() const {
  double best = 0.0;
  if (d_ == 1) return cell_diameter_bound(0);
  for (const Band& band : bands_) {
    // Cells within one band share the bound except through the nested
    // factor; nested cells are all congruent for d-1 == 1 but not deeper,
    // so take the honest per-cell max.
    if (band.polar_cap) {
      best = std::max(best, cell_diameter_bound(band.first_cell));
    } else {
      for (std::int64_t c = 0; c < band.cells; ++c)
        best = std::max(best, cell_diameter_bound(band.first_cell + c));
    }
  }
  return best;
}

Partition::DiameterCertificate Partition::diameter_certificate(
    std::int64_t cell, int samples, RandomStream& rng) const {
  if (samples < 2)
    throw std::invalid_argument("diameter_certificate: requires samples >= 2");
  const std::size_t n = static_cast<std::size_t>(samples);
  const std::size_t width = static_cast<std::size_t>(d_) + 1;
  std::vector<double> pts(n * width);
  for (std::size_t k = 0; k < n; ++k)
    sample_span(cell, rng, std::span<double>(pts).subspan(k * width, width));
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = std::span<const double>(pts).subspan(i * width, width);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto bsp = std::span<const double>(pts).subspan(j * width, width);
      best = std::max(best, geom::euclidean_span(a, bsp));
    }
  }
  return {best, cell_diameter_bound(cell)};
}

nlohmann::json Partition::to_json() const {
  nlohmann::json j;
  j["d"] = d_;
  j["N"] = N_;
  nlohmann::json bands = nlohmann::json::array();
  nlohmann::json nested = nlohmann::json::array();
  for (const Band& b : bands_) {
    bands.push_back({{"phi_lo", b.lo},
                     {"phi_hi", b.hi},
                     {"first_cell", b.first_cell},
                     {"cells", b.cells},
                     {"cap", b.polar_cap}});
    nested.push_back(b.angular ? b.angular->to_json() : nlohmann::json());
  }
  j["bands"] = std::move(bands);
  j["nested"] = std::move(nested);
  return j;
}

Partition Partition::from_json(const nlohmann::json& j) {
  Partition p(j.at("d").get<int>(), j.at("N").get<std::int64_t>());
  if (p.d_ < 1 || p.N_ < 1)
    throw std::invalid_argument("Partition::from_json: bad d or N");
  const auto& bands = j.at("bands");
  const auto& nested = j.at("nested");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    Band b;
    b.lo = bands[i].at("phi_lo").get<double>();
    b.hi = bands[i].at("phi_hi").get<double>();
    b.first_cell = bands[i].at("first_cell").get<std::int64_t>();
    b.cells = bands[i].at("cells").get<std::int64_t>();
    b.polar_cap = bands[i].at("cap").get<bool>();
    if (!nested[i].is_null())
      b.angular = std::make_shared<const Partition>(from_json(nested[i]));
    p.bands_.push_back(std::move(b));
  }
  return p;
}

bool Partition::operator==(const Partition& other) const {
  if (d_ != other.d_ || N_ != other.N_ ||
      bands_.size() != other.bands_.size())
    return false;
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const Band& a = bands_[i];
    const Band& b = other.bands_[i];
    if (a.lo != b.lo || a.hi != b.hi || a.first_cell != b.first_cell ||
        a.cells != b.cells || a.polar_cap != b.polar_cap)
      return false;
    if (static_cast<bool>(a.angular) != static_cast<bool>(b.angular))
      return false;
    if (a.angular && !(*a.angular == *b.angular)) return false;
  }
  return true;
}

}  // namespace spherebit
