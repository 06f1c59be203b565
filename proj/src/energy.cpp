#include "spherebit/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spherebit {

double wedge_energy(const PointSet& Z) {
  const std::int64_t n = Z.size();
  double off = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto zi = Z.point(i);
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double u = 0.5 - geom::geodesic_span(zi, Z.point(j));
      off += u * u;
    }
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return (2.0 * off + 0.25 * static_cast<double>(n)) / nn;
}

double frame_potential(const PointSet& Z) {
  const std::int64_t n = Z.size();
  double off = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto zi = Z.point(i);
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double t = geom::dot_span(zi, Z.point(j));
      off += t * t;
    }
  }
  return 2.0 * off + static_cast<double>(n);
}

std::vector<std::vector<double>> energy_gradient(const PointSet& Z) {
  const std::int64_t n = Z.size();
  const auto width = static_cast<std::size_t>(Z.dim()) + 1;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  std::vector<std::vector<double>> grad(
      static_cast<std::size_t>(n), std::vector<double>(width, 0.0));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto zi = Z.point(i);
    auto& gi = grad[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto zj = Z.point(j);
      double t = geom::dot_span(zi, zj);
      const double tc = std::clamp(t, -(1.0 - 1e-9), 1.0 - 1e-9);
      const double dist = std::acos(std::clamp(t, -1.0, 1.0)) / M_PI;
      const double coeff = (2.0 / nn) * 2.0 * (0.5 - dist) /
                           (M_PI * std::sqrt(1.0 - tc * tc));
      // tangent projection of z_j at z_i
      for (std::size_t c = 0; c < width; ++c)
        gi[c] += coeff * (zj[c] - t * zi[c]);
    }
    // Kill any residual normal component from roundoff.
    const double along = geom::dot_span(gi, zi);
    for (std::size_t c = 0; c < width; ++c) gi[c] -= along * zi[c];
  }
  return grad;
}

namespace {

double grad_sup_norm(const std::vector<std::vector<double>>& grad) {
  double sup = 0.0;
  for (const auto& g : grad) {
    double s = 0.0;
    for (double c : g) s += c * c;
    sup = std::max(sup, std::sqrt(s));
  }
  return sup;
}

}  // namespace

MinimizeResult minimize(const PointSet& Z0, std::int64_t max_steps,
                        double tol) {
  if (max_steps < 1)
    throw std::invalid_argument("minimize: requires max_steps >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize: requires tol > 0");

  const int d = Z0.dim();
  const auto width = static_cast<std::size_t>(d) + 1;
  const std::int64_t n = Z0.size();
  std::vector<double> flat = Z0.flat();
  PointSetMeta meta = Z0.meta();
  meta.method = PointSetMeta::Method::minimized;

  auto as_set = [&](const std::vector<double>& f) {
    return PointSet(d, f, meta);
  };

  double energy = wedge_energy(as_set(flat));
  std::vector<TraceRow> trace;
  bool converged = false;
  std::int64_t accepted = 0;

  auto grad = energy_gradient(as_set(flat));
  double gnorm = grad_sup_norm(grad);
  trace.push_back({0, energy, gnorm, 0.0});

  std::vector<double> candidate(flat.size());
  for (std::int64_t step = 1; step <= max_steps; ++step) {
    if (gnorm < tol) {
      converged = true;
      break;
    }
    double s = 0.1 / static_cast<double>(n);
    bool descended = false;
    double new_energy = energy;
    for (int halving = 0; halving < 30; ++halving) {
      for (std::int64_t i = 0; i < n; ++i) {
        const auto& gi = grad[static_cast<std::size_t>(i)];
        const auto row = static_cast<std::size_t>(i) * width;
        for (std::size_t c = 0; c < width; ++c)
          candidate[row + c] = flat[row + c] - s * gi[c];
        geom::normalize(std::span<double>(candidate).subspan(row, width));
      }
      new_energy = wedge_energy(as_set(candidate));
      if (new_energy < energy) {
        descended = true;
        break;
      }
      s *= 0.5;
    }
    if (!descended) break;  // line search exhausted; report what we have

    flat = candidate;
    energy = new_energy;
    ++accepted;
    grad = energy_gradient(as_set(flat));
    gnorm = grad_sup_norm(grad);
    trace.push_back({step, energy, gnorm, s});
    if (gnorm < tol) {
      converged = true;
      break;
    }
  }
  if (gnorm < tol) converged = true;

  return {as_set(flat), std::move(trace), converged, accepted};
}

}  // namespace spherebit
