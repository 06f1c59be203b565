// bounds.hpp -- the explicit constants and bound formulas: the partition
// diameter constant K_d, the wedge sup-discrepancy constant C_d, the
// Chernoff-Hoeffding tail, the boundary-cell count M, the approximating
// family cardinality, the union-bound lambda, and the N(d, delta) forms.
#pragma once

#include <cstdint>

#include <json.hpp>

namespace spherebit {

// K_d = 8 (Omega d / omega)^(1/d): diameter constant certified by the
// regular equal-area partition. K_2 = 16.
double partition_Kd(int d);

// C_d = 20 d^(3/4 + 1/(4d)): constant of the wedge sup-discrepancy bound,
// valid once N >= 100 d.
double wedge_Cd(int d);

// Chernoff-Hoeffding tail 2 exp(-2 lambda^2 / m) for a sum of m centered
// Bernoulli variables.
double hoeffding_tail(std::int64_t m, double lambda);

// M <= 64 d^(1/d) (omega/Omega)^(1 - 1/d) N^(1 - 1/d): the maximal number
// of partition cells that can meet the boundary of one wedge.
double boundary_cell_bound(int d, std::int64_t N);

// lambda = sqrt(alpha_d * M) * sqrt(log N), the large-deviation threshold
// that makes the union bound close.
double lambda_plan(int alpha_d, double M, std::int64_t N);

// (82 d)^(d+1) eps^(-2(d+1)): a priori cardinality of the wedge
// approximating family.
double net_cardinality_bound(int d, double epsilon);

// C_d N^(-1/2 - 1/(2d)) sqrt(log N): the sup-discrepancy bound at N points,
// hence the achievable RIP delta.
double rip_bound_at(int d, std::int64_t N);

struct NUpperResult {
  std::int64_t proof_form;   // tighter bound from the proof
  std::int64_t final_form;   // bound as stated, absolute constant 4000
  bool proof_verified;       // rip_bound_at(d, n) < delta after adjustment
  bool final_verified;
  double bound_at_proof;     // rip_bound_at at the returned values
  double bound_at_final;
};

// Point counts sufficient for delta-RIP, by both published forms, floored
// at 100 d and verified a posteriori against rip_bound_at (incrementing
// until the check holds, which in practice it already does).
NUpperResult rip_n_upper(int d, double delta);

struct BoundsTable {
  int d = 0;
  double K_d = 0.0;
  double C_d = 0.0;
  int alpha_d = 0;       // 2 (d+1), exponent of the family size in N
  double A_d = 0.0;      // (82 d)^(d+1)
  double alpha = 0.0;    // 5/2 - 2/(d+1)
  double gamma_exp = 0.0;  // 3/2 - 1/(d+1)

  static BoundsTable make(int d);
  nlohmann::json to_json() const;
};

}  // namespace spherebit
