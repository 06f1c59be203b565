// energy.hpp -- discrete pair energies behind the wedge L2 identity, the
// frame potential diagnostic, and a Riemannian descent minimizer.
#pragma once

#include <cstdint>
#include <vector>

#include "spherebit/onebit.hpp"

namespace spherebit {

// (1/N^2) sum_{i,j} (1/2 - d(z_i, z_j))^2, diagonal included (each diagonal
// term contributes 1/4; the L2 identity needs them).
double wedge_energy(const PointSet& Z);

// Total frame potential sum_{i,j} (z_i . z_j)^2. Minimized exactly by
// normalized tight frames; reported as a diagnostic alongside the wedge
// energy.
double frame_potential(const PointSet& Z);

// Tangent gradient of wedge_energy at each z_i: for t = z_i . z_j,
//   g_i = (2/N^2) sum_{j != i} 2 (1/2 - d_ij) / (pi sqrt(1 - t^2))
//         * (z_j - t z_i).
// |t| is clamped to 1 - 1e-9: the projection factor vanishes at t = +-1, so
// the clamped product is a removable-singularity approximation.
std::vector<std::vector<double>> energy_gradient(const PointSet& Z);

struct TraceRow {
  std::int64_t step;
  double energy;
  double grad_norm;  // sup over points of the tangent-vector length
  double step_size;  // accepted step (0 for the initial row)
};

struct MinimizeResult {
  PointSet Z;
  std::vector<TraceRow> trace;
  bool converged;            // gradient sup-norm fell below tol
  std::int64_t accepted_steps;
};

// Projected gradient descent with backtracking: step starts at 0.1/N and is
// halved up to 30 times until the energy decreases; iterates are
// renormalized to the sphere. Stops at max_steps, at grad sup-norm < tol,
// or when a full backtrack fails to descend. Energy never increases.
MinimizeResult minimize(const PointSet& Z0, std::int64_t max_steps, double tol);

}  // namespace spherebit
