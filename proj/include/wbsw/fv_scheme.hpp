#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/mood.hpp"

namespace wbsw {

struct FvRhs {
  std::vector<double> d_avg_h, d_avg_q;
};

namespace detail {
inline std::pair<double, double> physical_flux(double h, double u, double g) {
  return {h * u, h * u * u + 0.5 * g * h * h};
}
}  // namespace detail

/// Physical flux F(h, hu) evaluated from a node's point values.
inline std::pair<double, double> flux_at_node(double h, double u, const SchemeConfig& config) {
  if (h < 0.0) throw std::domain_error("flux_at_node: negative depth");
  return detail::physical_flux(h, u, config.g);
}

/// Cell average of the momentum source over cell j, written through the
/// equilibrium variables so that it cancels the flux difference exactly
/// whenever q and E are constant on the cell.
inline double source_average(const EquilibriumField& eq, const SchemeConfig& config, int j) {
  const double dx = eq.dx;
  const double g = config.g;
  const double hl = eq.h_nodes[j], ul = eq.u_nodes[j];
  const double hr = eq.h_nodes[j + 1], ur = eq.u_nodes[j + 1];
  const double hc = eq.h_centers[j], uc = eq.u_centers[j];

  auto d_left = [&](const PaddedArray& nodes, const PaddedArray& centers) {
    return (-3.0 * nodes[j] + 4.0 * centers[j] - nodes[j + 1]) / dx;
  };
  auto d_right = [&](const PaddedArray& nodes, const PaddedArray& centers) {
    return (nodes[j] - 4.0 * centers[j] + 3.0 * nodes[j + 1]) / dx;
  };
  auto d_center = [&](const PaddedArray& nodes) { return (nodes[j + 1] - nodes[j]) / dx; };

  const double flux_part = (hr * ur * ur - hl * ul * ul + 0.5 * g * (hr * hr - hl * hl)) / dx;
  const double uqx = ul * d_left(eq.q_nodes, eq.q_centers) + ur * d_right(eq.q_nodes, eq.q_centers) +
                     4.0 * uc * d_center(eq.q_nodes);
  const double hEx = hl * d_left(eq.E_nodes, eq.E_centers) + hr * d_right(eq.E_nodes, eq.E_centers) +
                     4.0 * hc * d_center(eq.E_nodes);
  return flux_part - uqx / 6.0 - hEx / 6.0;
}

/// Weight of the parachute flux at node j: the larger switch value of the two
/// adjacent cells.
inline double parachute_flux_weight(const EquilibriumField& eq, const SchemeConfig& config, int j) {
  const double left = gamma_switch(eq.E_nodes[j - 1], eq.E_nodes[j], eq.dx, eq.length, config);
  const double right = gamma_switch(eq.E_nodes[j], eq.E_nodes[j + 1], eq.dx, eq.length, config);
  return std::max(left, right);
}

/// d/dt of the cell averages. `node_flags` (size n+1, may be empty) selects
/// nodes whose point-value flux is replaced by the parachute flux.
inline FvRhs fv_rhs(const EquilibriumField& eq, const SchemeConfig& config,
                    const std::vector<std::uint8_t>& node_flags = {}) {
  const int n = eq.n_cells;
  const double dx = eq.dx;
  std::vector<double> f1(static_cast<std::size_t>(n + 1)), f2(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    const bool flagged = !node_flags.empty() && node_flags[j];
    auto [a, b] = detail::physical_flux(eq.h_nodes[j], eq.u_nodes[j], config.g);
    if (flagged) {
      // Near an equilibrium the switch hands the node back to the point-value
      // flux, so repairs do not keep knocking a steady state off balance.
      const auto [pa, pb] = parachute_fv_flux(eq, config, j);
      const double w = parachute_flux_weight(eq, config, j);
      a = w * pa + (1.0 - w) * a;
      b = w * pb + (1.0 - w) * b;
    }
    f1[j] = a;
    f2[j] = b;
  }
  FvRhs rhs{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) {
    rhs.d_avg_h[j] = -(f1[j + 1] - f1[j]) / dx;
    rhs.d_avg_q[j] = -(f2[j + 1] - f2[j]) / dx + source_average(eq, config, j);
  }
  return rhs;
}

}  // namespace wbsw
