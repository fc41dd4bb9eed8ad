#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/mood.hpp"

namespace wbsw {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

struct SplitJacobian {
  Mat2 j_plus{};
  Mat2 j_minus{};
};

struct OneSidedDeltas {
  Vec2 delta_plus{};   // from the left: nodes j-1, j-1/2, j
  Vec2 delta_minus{};  // from the right: nodes j, j+1/2, j+1
};

/// One-sided three-point derivatives of (q, E) at node j.
inline OneSidedDeltas one_sided_deltas(const EquilibriumField& eq, int j) {
  const double dx = eq.dx;
  auto plus = [&](const PaddedArray& nodes, const PaddedArray& centers) {
    return (nodes[j - 1] - 4.0 * centers[j - 1] + 3.0 * nodes[j]) / dx;
  };
  auto minus = [&](const PaddedArray& nodes, const PaddedArray& centers) {
    return (-3.0 * nodes[j] + 4.0 * centers[j] - nodes[j + 1]) / dx;
  };
  return {{plus(eq.q_nodes, eq.q_centers), plus(eq.E_nodes, eq.E_centers)},
          {minus(eq.q_nodes, eq.q_centers), minus(eq.E_nodes, eq.E_centers)}};
}

/// Regularized |lambda|: quadratic below the threshold, exact above it.
inline double entropy_fixed_abs(double lambda, double threshold) {
  const double a = std::abs(lambda);
  if (a >= threshold) return a;
  return (lambda * lambda + threshold * threshold) / (2.0 * threshold);
}

namespace detail {

inline SplitJacobian split_jacobian_unchecked(double h, double u, const SchemeConfig& config) {
  const double g = config.g;
  if (!(h >= config.eps_desing)) {
    SplitJacobian half;
    half.j_plus = {{{0.5, 0.0}, {0.0, 0.5}}};
    half.j_minus = half.j_plus;
    return half;
  }
  const double c = std::sqrt(g * h);
  const double threshold = config.entropy_fix_eps * (std::abs(u) + c);
  const double lambda1 = u - c;
  const double lambda2 = u + c;
  const double phi1 = entropy_fixed_abs(lambda1, threshold);
  const double phi2 = entropy_fixed_abs(lambda2, threshold);

  // With eigenvectors [[-s, s], [1, 1]], s = sqrt(h/g):
  // R diag(a, b) R^{-1} = [[(a+b)/2, s(b-a)/2], [(b-a)/(2s), (a+b)/2]].
  const double s = std::sqrt(h / g);
  auto assemble = [s](double a, double b) {
    return Mat2{{{0.5 * (a + b), 0.5 * s * (b - a)}, {0.5 * (b - a) / s, 0.5 * (a + b)}}};
  };
  SplitJacobian out;
  out.j_plus = assemble((phi1 + lambda1) / (2.0 * phi1), (phi2 + lambda2) / (2.0 * phi2));
  out.j_minus = assemble((phi1 - lambda1) / (2.0 * phi1), (phi2 - lambda2) / (2.0 * phi2));
  return out;
}

}  // namespace detail

/// Upwind projections of the primitive-form Jacobian at (h, u).
inline SplitJacobian split_jacobian(double h, double u, const SchemeConfig& config) {
  if (h < 0.0) throw std::domain_error("split_jacobian: negative depth");
  return detail::split_jacobian_unchecked(h, u, config);
}

/// Diagonal ratios (lambda_k^+/lambda_k, lambda_k^-/lambda_k) after the entropy fix.
inline std::pair<Vec2, Vec2> split_ratios(double h, double u, const SchemeConfig& config) {
  const double c = std::sqrt(config.g * std::max(h, 0.0));
  const double threshold = config.entropy_fix_eps * (std::abs(u) + c);
  Vec2 plus{0.5, 0.5}, minus{0.5, 0.5};
  if (!(threshold > 0.0)) return {plus, minus};
  const double lambdas[2] = {u - c, u + c};
  for (int k = 0; k < 2; ++k) {
    const double phi = entropy_fixed_abs(lambdas[k], threshold);
    plus[k] = (phi + lambdas[k]) / (2.0 * phi);
    minus[k] = (phi - lambdas[k]) / (2.0 * phi);
  }
  return {plus, minus};
}

struct RdRhs {
  std::vector<double> d_pt_h, d_pt_u;
};

/// d/dt of the node point values. Nodes set in `node_flags` use the
/// parachute residual; pinned Dirichlet components are left to the caller.
inline RdRhs rd_rhs(const EquilibriumField& eq, const SchemeConfig& config,
                    const std::vector<std::uint8_t>& node_flags = {}) {
  const int n = eq.n_cells;
  RdRhs rhs{std::vector<double>(static_cast<std::size_t>(n + 1)),
            std::vector<double>(static_cast<std::size_t>(n + 1))};
  for (int j = 0; j <= n; ++j) {
    if (!node_flags.empty() && node_flags[j]) {
      const auto [dh, du] = parachute_rd(eq, config, j);
      rhs.d_pt_h[j] = dh;
      rhs.d_pt_u[j] = du;
      continue;
    }
    const auto [dp, dm] = one_sided_deltas(eq, j);
    const auto J = detail::split_jacobian_unchecked(eq.h_nodes[j], eq.u_nodes[j], config);
    const Vec2 a = J.j_minus * dm;
    const Vec2 b = J.j_plus * dp;
    rhs.d_pt_h[j] = -(a[0] + b[0]);
    rhs.d_pt_u[j] = -(a[1] + b[1]);
  }
  return rhs;
}

}  // namespace wbsw
