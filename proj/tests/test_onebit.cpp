#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spherebit/onebit.hpp"
#include "spherebit/sampling.hpp"

using namespace spherebit;

namespace {

PointSet basis3() {
  return PointSet::from_points(
      {Point::axis(2, 0), Point::axis(2, 1), Point::axis(2, 2)});
}

}  // namespace

TEST_CASE("sign embedding: values and the sgn(0) = +1 convention") {
  const PointSet Z = PointSet::from_points({Point::axis(2, 0), Point::axis(2, 1)});
  const BitVector v = sign_embed(Z, Point({0.6, 0.8, 0.0}));
  CHECK(v.signs == std::vector<std::int8_t>{1, 1});
  // e3 is orthogonal to both: ties resolve to +1
  const BitVector t = sign_embed(Z, Point::axis(2, 2));
  CHECK(t.signs == std::vector<std::int8_t>{1, 1});
  CHECK_THROWS_AS(sign_embed(Z, Point::axis(3, 0)), std::invalid_argument);
}

TEST_CASE("sign embedding is odd away from ties") {
  RandomStream rng(31);
  const PointSet Z = random_set(2, 16, 5);
  for (int i = 0; i < 50; ++i) {
    const Point x = uniform_point(2, rng);
    const BitVector a = sign_embed(Z, x);
    const BitVector b = sign_embed(Z, -x);
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(a.signs[k] == -b.signs[k]);
  }
}

TEST_CASE("hamming distance") {
  BitVector a{{1, 1, -1, -1}};
  BitVector b{{1, -1, -1, 1}};
  CHECK(hamming(a, a) == 0.0);
  CHECK(hamming(a, b) == 0.5);
  BitVector na{{-1, -1, 1, 1}};
  CHECK(hamming(a, na) == 1.0);
  BitVector c{{1, 1, 1}};
  CHECK_THROWS_AS(hamming(a, c), std::invalid_argument);
}

TEST_CASE("wedge membership") {
  const WedgeDescriptor w(Point::axis(2, 0), Point::axis(2, 1));
  CHECK(wedge_contains(w, Point({1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0})));
  CHECK_FALSE(w.degenerate());

  const WedgeDescriptor empty(Point::axis(2, 0), Point::axis(2, 0));
  CHECK(empty.degenerate());
  RandomStream rng(37);
  for (int i = 0; i < 100; ++i)
    CHECK_FALSE(wedge_contains(empty, uniform_point(2, rng)));
}

TEST_CASE("separation probability equals the geodesic distance") {
  RandomStream rng(41);
  const Point x = uniform_point(2, rng);
  const Point y = uniform_point(2, rng);
  const WedgeDescriptor w(x, y);
  const double dist = geodesic_distance(x, y);
  const std::int64_t M = 1000000;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < M; ++i)
    if (wedge_contains(w, uniform_point(2, rng))) ++hits;
  const double freq = static_cast<double>(hits) / static_cast<double>(M);
  CHECK(std::abs(freq - dist) <
        4.0 * std::sqrt(dist * (1.0 - dist) / static_cast<double>(M)));
}

TEST_CASE("delta: degenerate wedges and single-point sets") {
  const PointSet Z = basis3();
  RandomStream rng(43);
  const Point x = uniform_point(2, rng);
  CHECK(delta(Z, x, x) == 0.0);

  // z_1 = e3 far from the wedge between two nearby directions in the
  // northern hemisphere tilted to keep signs equal
  const PointSet Zp = PointSet::from_points({Point::axis(2, 2)});
  const Point a({0.9, 0.1, std::sqrt(1.0 - 0.81 - 0.01)});
  const Point b({0.8, 0.3, std::sqrt(1.0 - 0.64 - 0.09)});
  CHECK(delta(Zp, a, b) == doctest::Approx(-geodesic_distance(a, b)).epsilon(1e-15));
}

TEST_CASE("delta equals hamming-of-embeddings minus distance") {
  RandomStream rng(47);
  for (std::int64_t n : {1, 2, 8, 32}) {
    const PointSet Z = random_set(2, n, 900 + n);
    for (int i = 0; i < 2500; ++i) {
      const Point x = uniform_point(2, rng);
      const Point y = uniform_point(2, rng);
      const double direct = delta(Z, x, y);
      const double via_embed =
          hamming(sign_embed(Z, x), sign_embed(Z, y)) - geodesic_distance(x, y);
      CHECK(direct == via_embed);
      CHECK(std::abs(direct) <= 1.0);
    }
  }
}

TEST_CASE("slice of a degenerate pair vanishes") {
  const PointSet Z = random_set(2, 8, 4700);
  RandomStream rng(48);
  for (int i = 0; i < 20; ++i) {
    const Point x = uniform_point(2, rng);
    CHECK(slice_discrepancy(Z, x, x) == 0.0);
  }
}

TEST_CASE("wedge = two slices, and symmetrization halves the slice error") {
  RandomStream rng(53);
  const PointSet Z = random_set(2, 16, 1234);
  const PointSet Zs = symmetrize(Z);
  for (int i = 0; i < 10000; ++i) {
    const Point x = uniform_point(2, rng);
    const Point y = uniform_point(2, rng);
    const double w = delta(Z, x, y);
    const double s1 = slice_discrepancy(Z, x, y);
    const double s2 = slice_discrepancy(Z, -x, -y);
    CHECK(w == doctest::Approx(s1 + s2).epsilon(1e-12));
    CHECK(w == doctest::Approx(2.0 * slice_discrepancy(Zs, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("symmetrize contents and invariance of delta") {
  const PointSet Z1 = PointSet::from_points({Point::axis(2, 0)});
  const PointSet Zs = symmetrize(Z1);
  CHECK(Zs.size() == 2);
  CHECK(Zs.point(0)[0] == 1.0);
  CHECK(Zs.point(1)[0] == -1.0);
  CHECK(symmetrize(Zs).size() == 4);

  RandomStream rng(59);
  const PointSet Z = random_set(2, 8, 77);
  const PointSet S = symmetrize(Z);
  for (int i = 0; i < 1000; ++i) {
    const Point x = uniform_point(2, rng);
    const Point y = uniform_point(2, rng);
    CHECK(delta(S, x, y) == doctest::Approx(delta(Z, x, y)).epsilon(1e-15));
  }
}

TEST_CASE("antipodal invariance of delta") {
  RandomStream rng(61);
  const PointSet Z = random_set(2, 12, 31);
  std::vector<double> neg_flat(Z.flat().size());
  for (std::size_t i = 0; i < neg_flat.size(); ++i) neg_flat[i] = -Z.flat()[i];
  const PointSet negZ(2, std::move(neg_flat));
  for (int i = 0; i < 1000; ++i) {
    const Point x = uniform_point(2, rng);
    const Point y = uniform_point(2, rng);
    const double base = delta(Z, x, y);
    CHECK(delta(negZ, x, y) == base);
    CHECK(delta(Z, -x, -y) == base);
  }
}

TEST_CASE("point-set construction rejects junk") {
  CHECK_THROWS_AS(PointSet(2, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointSet(2, {2.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointSet(0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointSet::from_points({}), std::invalid_argument);
}

TEST_CASE("rip check: single point fails any honest target") {
  const PointSet Z = PointSet::from_points({Point::axis(2, 2)});
  RandomStream rng(67);
  const RipCheckResult res = rip_sup_check(Z, 0.5, 20000, rng);
  CHECK_FALSE(res.passes);
  CHECK(res.sup_lower_bound >= 0.5);
  CHECK(res.witness.has_value());
}

TEST_CASE("rip check: target one always passes") {
  const PointSet Z = random_set(2, 16, 555);
  RandomStream rng(71);
  const RipCheckResult res = rip_sup_check(Z, 1.0, 5000, rng);
  CHECK(res.passes);
  CHECK_FALSE(res.witness.has_value());
}
