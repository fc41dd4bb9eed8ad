#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/grid.hpp"

namespace wbsw {

enum class TroubleReason : std::uint8_t { none = 0, nan_or_inf, negative_depth, new_extremum, speed_jump };

struct DetectionReport {
  std::vector<std::uint8_t> troubled;   // per cell
  std::vector<TroubleReason> reasons;   // per cell
  std::array<int, 5> counts{};          // indexed by TroubleReason

  int troubled_count() const { return counts[1] + counts[2] + counts[3] + counts[4]; }
  bool any() const { return troubled_count() > 0; }
};

/// A node is flagged when either adjacent cell is troubled.
inline std::vector<std::uint8_t> flagged_nodes(const std::vector<std::uint8_t>& troubled, bool periodic) {
  const int n = static_cast<int>(troubled.size());
  std::vector<std::uint8_t> nodes(static_cast<std::size_t>(n + 1), 0);
  for (int j = 0; j < n; ++j) {
    if (troubled[j]) {
      nodes[j] = 1;
      nodes[j + 1] = 1;
    }
  }
  if (periodic && (nodes[0] || nodes[n])) nodes[0] = nodes[n] = 1;
  return nodes;
}

/// Smooth cut-off (C eta)^m / (1 + (C eta)^m) of the normalized energy jump
/// across a cell; near 0 at equilibrium, near 1 away from it.
inline double gamma_switch(double E_j, double E_j1, double dx, double domain_length,
                           const SchemeConfig& config) {
  const double scale = std::max(E_j1, E_j);
  if (std::abs(scale) < 1e-14) return 1.0;
  const double eta = (E_j1 - E_j) / dx * (domain_length / scale);
  const double r = std::abs(config.switch_C * eta);
  if (!std::isfinite(r)) return 1.0;
  if (r <= 1.0) {
    const double p = std::pow(r, config.switch_m);
    return p / (1.0 + p);
  }
  return 1.0 / (1.0 + std::pow(1.0 / r, config.switch_m));
}

inline double wave_speed(double h, double u, double g) { return std::abs(u) + std::sqrt(g * std::max(h, 0.0)); }

/// First-order Local Lax-Friedrichs flux from the two cell averages adjacent to node j.
inline std::pair<double, double> parachute_fv_flux(const EquilibriumField& eq, const SchemeConfig& config,
                                                   int j) {
  const double g = config.g;
  const double eps = config.eps_desing;
  const double hl = eq.avg_h[j - 1], ql = eq.avg_q[j - 1];
  const double hr = eq.avg_h[j], qr = eq.avg_q[j];
  const double ul = desingularize(ql, hl, eps);
  const double ur = desingularize(qr, hr, eps);
  const double alpha = std::max(wave_speed(hl, ul, g), wave_speed(hr, ur, g));
  const double fl1 = hl >= eps ? ql : 0.0;
  const double fr1 = hr >= eps ? qr : 0.0;
  const double fl2 = ul * ql + 0.5 * g * hl * hl;
  const double fr2 = ur * qr + 0.5 * g * hr * hr;
  return {0.5 * (fl1 + fr1) - 0.5 * alpha * (hr - hl), 0.5 * (fl2 + fr2) - 0.5 * alpha * (qr - ql)};
}

namespace detail {

struct CellParachute {
  double q_bar, h_bar, u_bar, E_bar;
  double alpha_gamma;
};

inline CellParachute cell_parachute(const EquilibriumField& eq, const SchemeConfig& config, int c) {
  const double g = config.g;
  CellParachute p{};
  p.h_bar = eq.avg_h[c];
  // A dry average carries no discharge.
  p.q_bar = p.h_bar >= config.eps_desing ? eq.avg_q[c] : 0.0;
  p.u_bar = desingularize(p.q_bar, p.h_bar, config.eps_desing);
  const double Q_bar = 0.5 * (eq.Q_nodes[c] + eq.Q_nodes[c + 1]);
  p.E_bar = 0.5 * p.u_bar * p.u_bar + g * (p.h_bar + eq.z_centers[c]) + Q_bar;
  // The average state is included so that alpha bounds |u_bar| as well.
  const double alpha = std::max({wave_speed(eq.h_nodes[c], eq.u_nodes[c], g),
                                 wave_speed(eq.h_centers[c], eq.u_centers[c], g),
                                 wave_speed(eq.h_nodes[c + 1], eq.u_nodes[c + 1], g),
                                 wave_speed(p.h_bar, p.u_bar, g)});
  const double gamma = gamma_switch(eq.E_nodes[c], eq.E_nodes[c + 1], eq.dx, eq.length, config);
  p.alpha_gamma = alpha * gamma;
  return p;
}

}  // namespace detail

/// Parachute residual for the point values at node j: returns d(h, u)/dt.
inline std::pair<double, double> parachute_rd(const EquilibriumField& eq, const SchemeConfig& config, int j) {
  const double dx = eq.dx;
  const double hj = eq.h_nodes[j], uj = eq.u_nodes[j], qj = eq.q_nodes[j], Ej = eq.E_nodes[j];
  // Cell to the right of the node, j+1/2, distributing to its left node.
  const auto R = detail::cell_parachute(eq, config, j);
  const double from_right_1 = (R.q_bar - qj - R.alpha_gamma * (R.h_bar - hj)) / dx;
  const double from_right_2 = (R.E_bar - Ej - R.alpha_gamma * (R.u_bar - uj)) / dx;
  // Cell to the left, j-1/2, distributing to its right node.
  const auto L = detail::cell_parachute(eq, config, j - 1);
  const double from_left_1 = (qj - L.q_bar - L.alpha_gamma * (L.h_bar - hj)) / dx;
  const double from_left_2 = (Ej - L.E_bar - L.alpha_gamma * (L.u_bar - uj)) / dx;
  return {-(from_right_1 + from_left_1), -(from_right_2 + from_left_2)};
}

namespace detail {

// Derivatives of the cell parabola through (left node, average, right node).
inline double parabola_slope_left(double l, double avg, double r, double dx) { return (-4.0 * l + 6.0 * avg - 2.0 * r) / dx; }
inline double parabola_slope_center(double l, double r, double dx) { return (r - l) / dx; }
inline double parabola_slope_right(double l, double avg, double r, double dx) { return (2.0 * l - 6.0 * avg + 4.0 * r) / dx; }

inline double detection_factor(double slope_center, double slope_edge, double lo, double hi) {
  if (slope_edge > slope_center) return std::min(1.0, (hi - slope_center) / (slope_edge - slope_center));
  if (slope_edge < slope_center) return std::min(1.0, (lo - slope_center) / (slope_edge - slope_center));
  return 1.0;
}

struct DepthSamples {
  PaddedArray nodes;    // -1..n+1
  PaddedArray centers;  // -1..n
  PaddedArray avg;      // -1..n
};

inline DepthSamples depth_samples(const DualState& s, const Bathymetry& bathy, const BoundaryConditions& bc) {
  GhostedState g = with_ghosts(s, bathy, bc);
  const int n = g.n_cells;
  DepthSamples d{g.pt_h, PaddedArray(-1, n), g.avg_h};
  for (int j = -1; j <= n; ++j) d.centers[j] = interpolate_center(g.pt_h[j], g.avg_h[j], g.pt_h[j + 1]);
  return d;
}

// Seven samples j-1, j-1/2, j, j+1/2, j+1, j+3/2, j+2 around cell j. Ghost
// samples are skipped at a non-periodic boundary: a copied ghost would make
// every monotone profile look like an extremum there.
inline std::pair<double, double> local_range(const DepthSamples& d, int j, bool ghost_left = true,
                                             bool ghost_right = true) {
  double lo = d.nodes[j], hi = lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  if (ghost_left) {
    take(d.nodes[j - 1]);
    take(d.centers[j - 1]);
  }
  take(d.centers[j]);
  take(d.nodes[j + 1]);
  if (ghost_right) {
    take(d.centers[j + 1]);
    take(d.nodes[j + 2]);
  }
  return {lo, hi};
}

}  // namespace detail

/// A-posteriori admissibility check of a candidate step against the accepted
/// state it started from. Criteria per cell, in order: finite values,
/// positive depth, locally constant short-circuit, no new extremum (with the
/// smooth-extremum derivative test).
inline DetectionReport detect(const DualState& candidate, const DualState& previous, const Grid& grid,
                              const Bathymetry& bathy, const BoundaryConditions& bc, const SchemeConfig& config) {
  const int n = grid.n_cells();
  const double dx = grid.dx();
  const double eps_const = dx * dx * dx;
  DetectionReport rep;
  rep.troubled.assign(static_cast<std::size_t>(n), 0);
  rep.reasons.assign(static_cast<std::size_t>(n), TroubleReason::none);

  const auto cand = detail::depth_samples(candidate, bathy, bc);
  const auto prev = detail::depth_samples(previous, bathy, bc);

  // Thin layers can produce huge velocities without any depth going wrong;
  // a local speed above twice the previous global maximum is rejected.
  const double g = config.g;
  const double eps = config.eps_desing;
  auto avg_speed = [&](const DualState& s, int j) {
    return wave_speed(s.avg_h[j], desingularize(s.avg_q[j], s.avg_h[j], eps), g);
  };
  double speed_cap = 0.0;
  for (int j = 0; j <= n; ++j) speed_cap = std::max(speed_cap, wave_speed(previous.pt_h[j], previous.pt_u[j], g));
  for (int j = 0; j < n; ++j) speed_cap = std::max(speed_cap, avg_speed(previous, j));
  speed_cap *= 2.0;

  auto flag = [&](int j, TroubleReason why) {
    rep.troubled[j] = 1;
    rep.reasons[j] = why;
    ++rep.counts[static_cast<int>(why)];
  };

  const bool periodic = bc.periodic();
  for (int j = 0; j < n; ++j) {
    const bool has_left = periodic || j > 0;
    const bool has_right = periodic || j < n - 1;
    const bool finite = std::isfinite(candidate.pt_h[j]) && std::isfinite(candidate.pt_u[j]) &&
                        std::isfinite(candidate.pt_h[j + 1]) && std::isfinite(candidate.pt_u[j + 1]) &&
                        std::isfinite(candidate.avg_h[j]) && std::isfinite(candidate.avg_q[j]);
    if (!finite) {
      flag(j, TroubleReason::nan_or_inf);
      continue;
    }
    if (!(candidate.pt_h[j] > 0.0 && candidate.pt_h[j + 1] > 0.0 && candidate.avg_h[j] > 0.0)) {
      flag(j, TroubleReason::negative_depth);
      continue;
    }
    if (speed_cap > 0.0 && std::max({wave_speed(candidate.pt_h[j], candidate.pt_u[j], g),
                                     wave_speed(candidate.pt_h[j + 1], candidate.pt_u[j + 1], g),
                                     avg_speed(candidate, j)}) > speed_cap) {
      flag(j, TroubleReason::speed_jump);
      continue;
    }
    const auto [cand_lo, cand_hi] = detail::local_range(cand, j, has_left, has_right);
    if (std::abs(cand_hi - cand_lo) <= eps_const) continue;

    const auto [lo, hi] = detail::local_range(prev, j, has_left, has_right);
    const double delta = std::min(1e-4, 1e-3 * std::abs(hi - lo));
    bool inside = true;
    for (double v : {cand.nodes[j], cand.centers[j], cand.nodes[j + 1]})
      if (v < lo - delta || v > hi + delta) inside = false;
    if (inside) continue;

    auto center_slope = [&](int c) { return detail::parabola_slope_center(cand.nodes[c], cand.nodes[c + 1], dx); };
    const double slope = center_slope(j);
    const double slope_left = detail::parabola_slope_left(cand.nodes[j], cand.avg[j], cand.nodes[j + 1], dx);
    const double slope_right = detail::parabola_slope_right(cand.nodes[j], cand.avg[j], cand.nodes[j + 1], dx);
    // No neighbour slope bound exists past a non-periodic boundary.
    double beta_l = 1.0, beta_r = 1.0;
    if (has_left) {
      const double nb = center_slope(j - 1);
      beta_l = detail::detection_factor(slope, slope_left, std::min(slope, nb), std::max(slope, nb));
    }
    if (has_right) {
      const double nb = center_slope(j + 1);
      beta_r = detail::detection_factor(slope, slope_right, std::min(slope, nb), std::max(slope, nb));
    }
    if (std::min(beta_l, beta_r) >= 1.0 - 1e-12) continue;
    flag(j, TroubleReason::new_extremum);
  }
  return rep;
}

}  // namespace wbsw
