// partition.hpp -- regular (equal-area, bounded-diameter) partitions of S^d.
//
// The construction is the recursive zonal scheme: two polar caps of measure
// 1/N, and collars in between, each collar carrying a nested equal-area
// partition of S^{d-1} for its angular factor. Band boundaries are placed by
// root-solving the cap-measure equation, so every cell has measure exactly
// 1/N by construction, and every cell diameter is certified below
// K_d N^{-1/d} with K_d = 8 (Omega d / omega)^{1/d}.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "spherebit/geometry.hpp"
#include "spherebit/rng.hpp"

namespace spherebit {

class Partition {
 public:
  // Deterministic: identical (d, N) give bit-identical band boundaries.
  // d >= 1, N >= 1; d == 1 is the base case of N equal arcs.
  static Partition build(int d, std::int64_t N);

  int dim() const { return d_; }
  std::int64_t cell_count() const { return N_; }

  // Index of the cell containing x. Bands and arcs are half-open on the
  // upper end, except the last one which closes the sphere.
  std::int64_t locate(const Point& x) const;

  // A point distributed as N * sigma restricted to cell i: colatitude from
  // the band density ~ sin^{d-1}, angular part sampled recursively.
  Point sample_cell(std::int64_t cell, RandomStream& rng) const;

  // Analytic upper bound for the Euclidean diameter of a cell, from band
  // widths and the nested angular bound.
  double cell_diameter_bound(std::int64_t cell) const;
  double max_cell_diameter_bound() const;

  struct DiameterCertificate {
    double sampled_lower;   // max pairwise distance over sampled points
    double analytic_upper;  // band-based bound
  };
  DiameterCertificate diameter_certificate(std::int64_t cell, int samples,
                                           RandomStream& rng) const;

  nlohmann::json to_json() const;
  static Partition from_json(const nlohmann::json& j);

  bool operator==(const Partition& other) const;

  // One colatitude band. Caps hold a single cell; collars hold `cells`
  // cells cut by the nested angular partition. For d == 1 the partition is
  // arcs and the bands vector stays empty (arc k is [2 pi k / N, ...)).
  struct Band {
    double lo = 0.0, hi = 0.0;
    std::int64_t first_cell = 0;
    std::int64_t cells = 1;
    bool polar_cap = true;
    std::shared_ptr<const Partition> angular;
  };
  const std::vector<Band>& bands() const { return bands_; }

  // Span-based workhorses used by the samplers and tests.
  std::int64_t locate_span(std::span<const double> x) const;
  void sample_span(std::int64_t cell, RandomStream& rng,
                   std::span<double> out) const;

 private:
  Partition(int d, std::int64_t N) : d_(d), N_(N) {}

  int d_ = 1;
  std::int64_t N_ = 1;
  std::vector<Band> bands_;
};

}  // namespace spherebit
