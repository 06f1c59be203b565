#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spherebit/bounds.hpp"
#include "spherebit/discrepancy.hpp"
#include "spherebit/sampling.hpp"

using namespace spherebit;

TEST_CASE("random sets are reproducible and carry provenance") {
  const PointSet a = random_set(2, 32, 7);
  const PointSet b = random_set(2, 32, 7);
  CHECK(a.flat() == b.flat());
  const PointSet c = random_set(2, 32, 8);
  CHECK(a.flat() != c.flat());
  CHECK(a.meta().method == PointSetMeta::Method::random);
  CHECK(a.meta().seed == 7);
  CHECK_THROWS_AS(random_set(2, 0, 1), std::invalid_argument);
}

TEST_CASE("expected exact L2 over random sets (wedge and cap)") {
  const int sets = 300;
  double sw = 0, sw2 = 0, sc = 0, sc2 = 0;
  for (int s = 0; s < sets; ++s) {
    const PointSet Z = random_set(2, 8, 20000 + s);
    const double w = l2_wedge_exact(Z);
    const double c = l2_cap_exact(Z);
    sw += w;
    sw2 += w * w;
    sc += c;
    sc2 += c * c;
  }
  const double mw = sw / sets;
  const double se_w = std::sqrt((sw2 / sets - mw * mw) / (sets - 1));
  CHECK(std::abs(mw - (0.5 - disc_detail::cached_Vd(2)) / 8.0) < 4.0 * se_w);
  const double mc = sc / sets;
  const double se_c = std::sqrt((sc2 / sets - mc * mc) / (sets - 1));
  CHECK(std::abs(mc - 1.0 / 24.0) < 4.0 * se_c);
}

TEST_CASE("jittered sets: one point per cell, provenance, reproducibility") {
  const std::int64_t N = 64;
  const PointSet Z = jittered_set(2, N, 3);
  CHECK(Z.size() == N);
  CHECK(Z.meta().method == PointSetMeta::Method::jittered);
  CHECK(Z.meta().partition_cells == N);
  const Partition& part = cached_partition(2, N);
  for (std::int64_t k = 0; k < N; ++k)
    CHECK(part.locate(Z.point_at(k)) == k);
  CHECK(jittered_set(2, N, 3).flat() == Z.flat());
}

TEST_CASE("partition cache returns one instance per key") {
  const Partition& a = cached_partition(2, 48);
  const Partition& b = cached_partition(2, 48);
  CHECK(&a == &b);
}

TEST_CASE("jittered mean L2 under the partition bound") {
  const std::int64_t N = 64;
  const int seeds = 100;
  double mean = 0.0;
  for (int s = 0; s < seeds; ++s)
    mean += l2_wedge_exact(jittered_set(2, N, 100 + s));
  mean /= seeds;
  CHECK(mean <= partition_Kd(2) * std::pow(static_cast<double>(N), -1.5));
}

TEST_CASE("jittered beats random on average at N=256") {
  const int seeds = 100;
  double jit = 0.0, rnd = 0.0;
  for (int s = 0; s < seeds; ++s) {
    jit += l2_wedge_exact(jittered_set(2, 256, 300 + s));
    rnd += l2_wedge_exact(random_set(2, 256, 300 + s));
  }
  CHECK(jit / seeds < rnd / seeds);
}

TEST_CASE("scaling exponents over the N-grid") {
  auto fit_slope = [](const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const auto n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };

  // jittered: slope -(1 + 1/d) = -1.5 within +-0.15 at reduced seed count
  {
    std::vector<std::pair<double, double>> pts;
    for (std::int64_t N : {16, 64, 256}) {
      double mean = 0.0;
      const int seeds = 60;
      for (int s = 0; s < seeds; ++s)
        mean += l2_wedge_exact(jittered_set(2, N, 40000 + s));
      pts.emplace_back(std::log(static_cast<double>(N)), std::log(mean / seeds));
    }
    const double slope = fit_slope(pts);
    CHECK(slope > -1.65);
    CHECK(slope < -1.35);
  }

  // random: exact expectation (1/N)(1/2 - V_d) forces slope -1 within 0.05
  {
    std::vector<std::pair<double, double>> pts;
    for (std::int64_t N : {16, 64, 256, 1024}) {
      double mean = 0.0;
      const int seeds = 200;
      for (int s = 0; s < seeds; ++s)
        mean += l2_wedge_exact(random_set(2, N, 50000 + 7 * s));
      pts.emplace_back(std::log(static_cast<double>(N)), std::log(mean / seeds));
    }
    const double slope = fit_slope(pts);
    CHECK(slope > -1.05);
    CHECK(slope < -0.95);
  }
}
