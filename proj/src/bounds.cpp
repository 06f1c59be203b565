#include "spherebit/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "spherebit/geometry.hpp"

namespace spherebit {

double partition_Kd(int d) {
  if (d < 2) throw std::invalid_argument("partition_Kd: requires d >= 2");
  return 8.0 * std::pow(static_cast<double>(d) / omega_ratio(d), 1.0 / d);
}

double wedge_Cd(int d) {
  if (d < 2) throw std::invalid_argument("wedge_Cd: requires d >= 2");
  return 20.0 * std::pow(static_cast<double>(d), 0.75 + 0.25 / d);
}

double hoeffding_tail(std::int64_t m, double lambda) {
  if (m < 1) throw std::invalid_argument("hoeffding_tail: requires m >= 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("hoeffding_tail: requires lambda > 0");
  return 2.0 * std::exp(-2.0 * lambda * lambda / static_cast<double>(m));
}

double boundary_cell_bound(int d, std::int64_t N) {
  if (d < 2) throw std::invalid_argument("boundary_cell_bound: requires d >= 2");
  if (N < 1) throw std::invalid_argument("boundary_cell_bound: requires N >= 1");
  const double r = omega_ratio(d);
  return 64.0 * std::pow(static_cast<double>(d), 1.0 / d) *
         std::pow(r, 1.0 - 1.0 / d) *
         std::pow(static_cast<double>(N), 1.0 - 1.0 / d);
}

double lambda_plan(int alpha_d, double M, std::int64_t N) {
  if (N < 2) throw std::invalid_argument("lambda_plan: requires N >= 2");
  if (alpha_d < 1 || !(M > 0.0))
    throw std::invalid_argument("lambda_plan: requires alpha_d >= 1, M > 0");
  return std::sqrt(static_cast<double>(alpha_d) * M) *
         std::sqrt(std::log(static_cast<double>(N)));
}

double net_cardinality_bound(int d, double epsilon) {
  if (d < 1) throw std::invalid_argument("net_cardinality_bound: requires d >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("net_cardinality_bound: requires 0 < eps <= 1");
  return std::pow(82.0 * d, d + 1) * std::pow(epsilon, -2.0 * (d + 1));
}

double rip_bound_at(int d, std::int64_t N) {
  if (d < 2) throw std::invalid_argument("rip_bound_at: requires d >= 2");
  if (N < 2) throw std::invalid_argument("rip_bound_at: requires N >= 2");
  const double n = static_cast<double>(N);
  return wedge_Cd(d) * std::pow(n, -0.5 - 0.5 / d) * std::sqrt(std::log(n));
}

NUpperResult rip_n_upper(int d, double delta) {
  if (d < 2) throw std::invalid_argument("rip_n_upper: requires d >= 2");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("rip_n_upper: requires 0 < delta < 1");

  const double dd = static_cast<double>(d);
  const double log_inv_delta = std::log(1.0 / delta);

  // Proof form: N > 400 d^g delta^(-2d/(d+1))
  //             ((d+1) log(400 d^g) + 2d log(1/delta))^(d/(d+1)),
  // with g = 3/2 - 1/(d+1).
  const double g = 1.5 - 1.0 / (d + 1);
  const double base = 400.0 * std::pow(dd, g);
  const double proof_value =
      base * std::pow(delta, -2.0 * d / (d + 1.0)) *
      std::pow((d + 1.0) * std::log(base) + 2.0 * d * log_inv_delta,
               dd / (d + 1.0));

  // Final form: 4000 d^a delta^(-2 + 2/(d+1))
  //             (1 + log d + log(1/delta))^(d/(d+1)), a = 5/2 - 2/(d+1).
  const double a = 2.5 - 2.0 / (d + 1);
  const double final_value =
      4000.0 * std::pow(dd, a) * std::pow(delta, -2.0 + 2.0 / (d + 1.0)) *
      std::pow(1.0 + std::log(dd) + log_inv_delta, dd / (d + 1.0));

  const std::int64_t floor_n = 100 * static_cast<std::int64_t>(d);
  auto settle = [&](double value) {
    auto n = std::max<std::int64_t>(
        floor_n, static_cast<std::int64_t>(std::ceil(value)));
    while (!(rip_bound_at(d, n) < delta)) ++n;
    return n;
  };

  NUpperResult out;
  out.proof_form = settle(proof_value);
  out.final_form = settle(final_value);
  out.bound_at_proof = rip_bound_at(d, out.proof_form);
  out.bound_at_final = rip_bound_at(d, out.final_form);
  out.proof_verified = out.bound_at_proof < delta;
  out.final_verified = out.bound_at_final < delta;
  return out;
}

BoundsTable BoundsTable::make(int d) {
  if (d < 2) throw std::invalid_argument("BoundsTable: requires d >= 2");
  BoundsTable t;
  t.d = d;
  t.K_d = partition_Kd(d);
  t.C_d = wedge_Cd(d);
  t.alpha_d = 2 * (d + 1);
  t.A_d = std::pow(82.0 * d, d + 1);
  t.alpha = 2.5 - 2.0 / (d + 1);
  t.gamma_exp = 1.5 - 1.0 / (d + 1);
  return t;
}

nlohmann::json BoundsTable::to_json() const {
  return {{"d", d},          {"K_d", K_d},     {"C_d", C_d},
          {"alpha_d", alpha_d}, {"A_d", A_d}, {"alpha", alpha},
          {"gamma_exp", gamma_exp}};
}

}  // namespace spherebit
