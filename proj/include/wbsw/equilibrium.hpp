#pragma once

#include <cmath>
#include <utility>

#include "wbsw/config.hpp"
#include "wbsw/grid.hpp"

namespace wbsw {

/// a/b when b >= eps, otherwise 0.
inline double desingularize(double a, double b, double eps) { return b >= eps ? a / b : 0.0; }

/// Value at the cell center of the parabola matching both node values and the cell average.
inline double interpolate_center(double u_left, double u_avg, double u_right) {
  return 1.5 * u_avg - 0.25 * (u_left + u_right);
}

/// Same parabola evaluated a quarter cell from the left node.
inline double interpolate_quarter(double u_left, double u_avg, double u_right) {
  return (3.0 / 16.0) * u_left + (18.0 / 16.0) * u_avg - (5.0 / 16.0) * u_right;
}

/// |q| q / h^{10/3}, zero for depths below the dry threshold (negative depths included).
inline double friction_integrand(double h, double q, double eps) {
  if (!(h >= eps)) return 0.0;
  return std::abs(q) * q / std::pow(h, 10.0 / 3.0);
}

/// Conserved-variable samples on the ghost-extended stencil. Every array
/// spans cells -1..n (centers, quarters) or nodes -1..n+1.
struct Reconstruction {
  int n_cells = 0;
  bool pinned_left = false, pinned_right = false;
  PaddedArray h_nodes, u_nodes, q_nodes;
  PaddedArray h_centers, q_centers;
  PaddedArray h_quarter, q_quarter;
};

inline Reconstruction reconstruct(const GhostedState& s, const SchemeConfig& config) {
  const int n = s.n_cells;
  Reconstruction r;
  r.n_cells = n;
  r.pinned_left = s.pinned_left;
  r.pinned_right = s.pinned_right;
  r.h_nodes = PaddedArray(-1, n + 1);
  r.u_nodes = PaddedArray(-1, n + 1);
  r.q_nodes = PaddedArray(-1, n + 1);
  for (int j = -1; j <= n + 1; ++j) {
    const double h = s.pt_h[j];
    const double u = h >= config.eps_desing ? s.pt_u[j] : 0.0;
    r.h_nodes[j] = h;
    r.u_nodes[j] = u;
    r.q_nodes[j] = h * u;
  }
  r.h_centers = PaddedArray(-1, n);
  r.q_centers = PaddedArray(-1, n);
  r.h_quarter = PaddedArray(-1, n);
  r.q_quarter = PaddedArray(-1, n);
  for (int j = -1; j <= n; ++j) {
    r.h_centers[j] = interpolate_center(r.h_nodes[j], s.avg_h[j], r.h_nodes[j + 1]);
    r.q_centers[j] = interpolate_center(r.q_nodes[j], s.avg_q[j], r.q_nodes[j + 1]);
    r.h_quarter[j] = interpolate_quarter(r.h_nodes[j], s.avg_h[j], r.h_nodes[j + 1]);
    r.q_quarter[j] = interpolate_quarter(r.q_nodes[j], s.avg_q[j], r.q_nodes[j + 1]);
  }
  return r;
}

struct FrictionIntegral {
  PaddedArray nodes;    // -1..n+1
  PaddedArray centers;  // -1..n
};

/// Friction integral anchored at the left boundary node (Q = 0 there), built
/// cell by cell with Simpson's rule and accumulated left to right.
inline FrictionIntegral compute_Q(const Reconstruction& r, double dx, const SchemeConfig& config) {
  const int n = r.n_cells;
  FrictionIntegral Q{PaddedArray(-1, n + 1), PaddedArray(-1, n)};
  if (config.manning_n == 0.0) return Q;

  const double eps = config.eps_desing;
  const double c = config.g * config.manning_n * config.manning_n * dx;
  auto s_node = [&](int j) { return friction_integrand(r.h_nodes[j], r.q_nodes[j], eps); };
  auto s_center = [&](int j) { return friction_integrand(r.h_centers[j], r.q_centers[j], eps); };
  auto s_quarter = [&](int j) { return friction_integrand(r.h_quarter[j], r.q_quarter[j], eps); };
  auto full = [&](int j) { return c / 6.0 * (s_node(j) + s_node(j + 1) + 4.0 * s_center(j)); };
  auto half = [&](int j) { return c / 12.0 * (s_node(j) + s_center(j) + 4.0 * s_quarter(j)); };

  Q.nodes[0] = 0.0;
  for (int j = 0; j <= n; ++j) Q.nodes[j + 1] = Q.nodes[j] + full(j);
  Q.nodes[-1] = Q.nodes[0] - full(-1);
  for (int j = -1; j <= n; ++j) Q.centers[j] = Q.nodes[j] + half(j);
  // A pinned ghost cell is the boundary state itself; no friction across it.
  if (r.pinned_left) Q.nodes[-1] = Q.centers[-1] = Q.nodes[0];
  if (r.pinned_right) Q.nodes[n + 1] = Q.centers[n] = Q.nodes[n];
  return Q;
}

inline FrictionIntegral compute_Q(const DualState& state, const Grid& grid, const Bathymetry& bathy,
                                  const BoundaryConditions& bc, const SchemeConfig& config) {
  return compute_Q(reconstruct(with_ghosts(state, bathy, bc), config), grid.dx(), config);
}

/// Everything the right-hand sides read: equilibrium variables (q, E), the
/// friction integral, reconstructed primitive values and the raw averages,
/// all on the ghost-extended stencil.
struct EquilibriumField {
  int n_cells = 0;
  double dx = 0.0;
  double length = 0.0;
  // nodes -1..n+1
  PaddedArray h_nodes, u_nodes, q_nodes, E_nodes, Q_nodes, z_nodes;
  // centers -1..n
  PaddedArray h_centers, u_centers, q_centers, E_centers, Q_centers, z_centers;
  PaddedArray h_quarter, q_quarter;
  PaddedArray avg_h, avg_q;
};

inline EquilibriumField assemble_equilibrium(const GhostedState& s, const Grid& grid,
                                             const SchemeConfig& config) {
  const int n = s.n_cells;
  const double g = config.g;
  Reconstruction r = reconstruct(s, config);
  FrictionIntegral Q = compute_Q(r, grid.dx(), config);

  EquilibriumField eq;
  eq.n_cells = n;
  eq.dx = grid.dx();
  eq.length = grid.length();
  eq.E_nodes = PaddedArray(-1, n + 1);
  for (int j = -1; j <= n + 1; ++j) {
    const double u = r.u_nodes[j];
    eq.E_nodes[j] = 0.5 * u * u + g * (r.h_nodes[j] + s.z_nodes[j]) + Q.nodes[j];
  }
  eq.u_centers = PaddedArray(-1, n);
  eq.E_centers = PaddedArray(-1, n);
  for (int j = -1; j <= n; ++j) {
    const double u = desingularize(r.q_centers[j], r.h_centers[j], config.eps_desing);
    eq.u_centers[j] = u;
    eq.E_centers[j] = 0.5 * u * u + g * (r.h_centers[j] + s.z_centers[j]) + Q.centers[j];
  }
  eq.h_nodes = std::move(r.h_nodes);
  eq.u_nodes = std::move(r.u_nodes);
  eq.q_nodes = std::move(r.q_nodes);
  eq.Q_nodes = std::move(Q.nodes);
  eq.z_nodes = s.z_nodes;
  eq.h_centers = std::move(r.h_centers);
  eq.q_centers = std::move(r.q_centers);
  eq.Q_centers = std::move(Q.centers);
  eq.z_centers = s.z_centers;
  eq.h_quarter = std::move(r.h_quarter);
  eq.q_quarter = std::move(r.q_quarter);
  eq.avg_h = s.avg_h;
  eq.avg_q = s.avg_q;
  return eq;
}

inline EquilibriumField assemble_equilibrium(const DualState& state, const Grid& grid,
                                             const Bathymetry& bathy, const BoundaryConditions& bc,
                                             const SchemeConfig& config) {
  return assemble_equilibrium(with_ghosts(state, bathy, bc), grid, config);
}

inline EquilibriumField assemble_equilibrium(const DualState& state, const Grid& grid,
                                             const Bathymetry& bathy, const SchemeConfig& config) {
  return assemble_equilibrium(state, grid, bathy, BoundaryConditions{}, config);
}

}  // namespace wbsw
