#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "spherebit/bounds.hpp"
#include "spherebit/geometry.hpp"
#include "spherebit/partition.hpp"
#include "spherebit/rng.hpp"

using namespace spherebit;

TEST_CASE("partition diameter constant") {
  CHECK(partition_Kd(2) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(partition_Kd(3) ==
        doctest::Approx(8.0 * std::cbrt(1.5 * M_PI)).epsilon(1e-12));
  for (int d = 2; d <= 50; ++d) {
    const double k = partition_Kd(d);
    CHECK(k > 0.0);
    CHECK(std::isfinite(k));
  }
  CHECK_THROWS_AS(partition_Kd(1), std::invalid_argument);
}

TEST_CASE("wedge sup-discrepancy constant") {
  CHECK(wedge_Cd(2) == doctest::Approx(20.0 * std::pow(2.0, 0.875)).epsilon(1e-13));
  CHECK(wedge_Cd(3) ==
        doctest::Approx(20.0 * std::pow(3.0, 5.0 / 6.0)).epsilon(1e-13));
  double prev = 0.0;
  for (int d = 2; d <= 50; ++d) {
    const double c = wedge_Cd(d);
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("Hoeffding tail: values and simulated frequencies") {
  CHECK(hoeffding_tail(100, 20.0) ==
        doctest::Approx(2.0 * std::exp(-8.0)).epsilon(1e-13));
  CHECK(hoeffding_tail(50, 1e-9) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(hoeffding_tail(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_tail(10, 0.0), std::invalid_argument);

  // simulation of the lemma's setup: X = sum of centered Bernoulli(p_i)
  RandomStream rng(271828);
  const int trials = 100000;
  for (int m : {20, 50, 100}) {
    std::vector<double> p(static_cast<std::size_t>(m));
    for (auto& v : p) v = rng.uniform();
    for (double lambda : {2.0, 5.0, 10.0}) {
      int exceed = 0;
      RandomStream sim = rng.split(static_cast<std::uint64_t>(m * 100) +
                                   static_cast<std::uint64_t>(lambda));
      for (int t = 0; t < trials; ++t) {
        double x = 0.0;
        for (int i = 0; i < m; ++i) {
          const double pi_ = p[static_cast<std::size_t>(i)];
          x += (sim.uniform() < pi_) ? 1.0 - pi_ : -pi_;
        }
        if (std::abs(x) > lambda) ++exceed;
      }
      CHECK(static_cast<double>(exceed) / trials <= hoeffding_tail(m, lambda));
    }
  }
}

TEST_CASE("boundary cell bound: values") {
  CHECK(boundary_cell_bound(2, 1000) ==
        doctest::Approx(64.0 * std::sqrt(1000.0)).epsilon(1e-12));
  CHECK(boundary_cell_bound(2, 1) == doctest::Approx(64.0).epsilon(1e-12));
}

TEST_CASE("boundary cell bound: empirical wedge-boundary counts") {
  RandomStream rng(314159);
  for (std::int64_t N : {100, 400}) {
    const Partition part = Partition::build(2, N);
    const double bound = boundary_cell_bound(2, N);
    for (int trial = 0; trial < 10; ++trial) {
      const Point x = uniform_point(2, rng);
      const Point y = uniform_point(2, rng);
      std::set<std::int64_t> touched;
      // walk both boundary great circles z.x = 0 and z.y = 0
      for (const Point& axis : {x, y}) {
        const auto u = oracles::random_tangent(axis.span(), rng);
        std::vector<double> v(3);
        // second tangent direction orthogonal to both
        v[0] = axis[1] * u[2] - axis[2] * u[1];
        v[1] = axis[2] * u[0] - axis[0] * u[2];
        v[2] = axis[0] * u[1] - axis[1] * u[0];
        for (int s = 0; s < 20000; ++s) {
          const double th = 2.0 * M_PI * s / 20000.0;
          const Point z({std::cos(th) * u[0] + std::sin(th) * v[0],
                         std::cos(th) * u[1] + std::sin(th) * v[1],
                         std::cos(th) * u[2] + std::sin(th) * v[2]});
          touched.insert(part.locate(z));
        }
      }
      CHECK(static_cast<double>(touched.size()) <= bound);
    }
  }
}

TEST_CASE("lambda plan: formula, scaling, union-bound equality") {
  for (std::int64_t N : {2, 10, 1000}) {
    const double l = lambda_plan(6, 100.0, N);
    CHECK(l * l == doctest::Approx(600.0 * std::log(static_cast<double>(N)))
                       .epsilon(1e-13));
  }
  CHECK(lambda_plan(6, 200.0, 50) ==
        doctest::Approx(std::sqrt(2.0) * lambda_plan(6, 100.0, 50)).epsilon(1e-13));
  CHECK_THROWS_AS(lambda_plan(6, 100.0, 1), std::invalid_argument);

  // lambda/N with M at its bound reproduces the explicit discrepancy
  // constant 8 sqrt(alpha_d) d^(1/2d) (omega/Omega)^(1/2 - 1/2d)
  for (int d : {2, 3, 5}) {
    const int alpha_d = 2 * (d + 1);
    for (std::int64_t N : {100, 10000}) {
      const double lhs =
          lambda_plan(alpha_d, boundary_cell_bound(d, N), N) /
          static_cast<double>(N);
      const double rhs = 8.0 * std::sqrt(static_cast<double>(alpha_d)) *
                         std::pow(static_cast<double>(d), 0.5 / d) *
                         std::pow(omega_ratio(d), 0.5 - 0.5 / d) *
                         std::pow(static_cast<double>(N), -0.5 - 0.5 / d) *
                         std::sqrt(std::log(static_cast<double>(N)));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("net cardinality bound") {
  CHECK(net_cardinality_bound(2, 1.0) ==
        doctest::Approx(164.0 * 164.0 * 164.0).epsilon(1e-12));
  CHECK(net_cardinality_bound(2, 0.05) ==
        doctest::Approx(net_cardinality_bound(2, 0.1) * 64.0).epsilon(1e-12));
  CHECK_THROWS_AS(net_cardinality_bound(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(net_cardinality_bound(2, 1.5), std::invalid_argument);
}

TEST_CASE("achievable RIP level at N points") {
  CHECK(rip_bound_at(2, 10000) ==
        doctest::Approx(wedge_Cd(2) * 1e-3 * std::sqrt(std::log(1e4)))
            .epsilon(1e-13));
  CHECK(rip_bound_at(2, 2) > 0.0);
  CHECK(std::isfinite(rip_bound_at(2, 2)));
  for (int d : {2, 3, 10}) {
    double prev = rip_bound_at(d, 3);
    for (std::int64_t n = 4; n <= 1000; ++n) {
      const double cur = rip_bound_at(d, n);
      CHECK(cur < prev);
      prev = cur;
    }
    for (std::int64_t n = 2000; n <= 10000000; n *= 2) {
      const double cur = rip_bound_at(d, n);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("sufficient point counts: frozen case and self-consistency grid") {
  const NUpperResult r = rip_n_upper(2, 0.1);
  CHECK(r.proof_form == 185167);
  CHECK(r.final_form == 773297);
  CHECK(r.proof_verified);
  CHECK(r.final_verified);
  CHECK(r.proof_form <= r.final_form);

  for (int d : {2, 3, 4}) {
    std::int64_t prev_proof = -1, prev_final = -1;
    for (double delta : {0.05, 0.1, 0.2}) {
      const NUpperResult res = rip_n_upper(d, delta);
      CHECK(res.proof_form >= 100 * d);
      CHECK(res.final_form >= 100 * d);
      CHECK(rip_bound_at(d, res.proof_form) < delta);
      CHECK(rip_bound_at(d, res.final_form) < delta);
      // nonincreasing in delta
      if (prev_proof >= 0) {
        CHECK(res.proof_form <= prev_proof);
        CHECK(res.final_form <= prev_final);
      }
      prev_proof = res.proof_form;
      prev_final = res.final_form;
    }
  }
  // nondecreasing in d at fixed delta
  CHECK(rip_n_upper(3, 0.1).final_form >= rip_n_upper(2, 0.1).final_form);
  CHECK(rip_n_upper(4, 0.1).final_form >= rip_n_upper(3, 0.1).final_form);
  CHECK_THROWS_AS(rip_n_upper(1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rip_n_upper(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rip_n_upper(2, 1.0), std::invalid_argument);
}

TEST_CASE("bounds table bundle") {
  const BoundsTable t = BoundsTable::make(2);
  CHECK(t.K_d == doctest::Approx(16.0));
  CHECK(t.C_d == doctest::Approx(wedge_Cd(2)));
  CHECK(t.alpha_d == 6);
  CHECK(t.A_d == doctest::Approx(164.0 * 164.0 * 164.0));
  CHECK(t.alpha == doctest::Approx(2.5 - 2.0 / 3.0));
  CHECK(t.gamma_exp == doctest::Approx(1.5 - 1.0 / 3.0));
  const auto j = t.to_json();
  CHECK(j.at("K_d").get<double>() == doctest::Approx(16.0));
  for (int d = 2; d <= 50; ++d) {
    const BoundsTable tb = BoundsTable::make(d);
    CHECK(std::isfinite(tb.K_d));
    CHECK(std::isfinite(tb.C_d));
    CHECK(tb.K_d > 0.0);
    CHECK(tb.C_d > 0.0);
  }
}
