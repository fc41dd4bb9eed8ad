#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wbsw/config.hpp"

namespace wbsw {

/// Uniform 1-D mesh. Nodes x_j, j = 0..n_cells; centers x_{j+1/2}, j = 0..n_cells-1.
class Grid {
 public:
  Grid(double x_left, double x_right, int n_cells)
      : x_left_(x_left), x_right_(x_right), n_cells_(n_cells) {
    if (n_cells < 4) throw ConfigError("grid needs at least 4 cells");
    if (!(x_right > x_left)) throw ConfigError("grid needs x_right > x_left");
    dx_ = (x_right - x_left) / n_cells;
  }

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  int n_cells() const { return n_cells_; }
  int n_nodes() const { return n_cells_ + 1; }
  double dx() const { return dx_; }
  double length() const { return x_right_ - x_left_; }

  double node(int j) const { return j == n_cells_ ? x_right_ : x_left_ + j * dx_; }
  double center(int j) const { return 0.5 * (node(j) + node(j + 1)); }

 private:
  double x_left_;
  double x_right_;
  int n_cells_;
  double dx_;
};

/// Bottom elevation sampled where the scheme needs it.
struct Bathymetry {
  std::vector<double> z_nodes;    // n_cells + 1
  std::vector<double> z_centers;  // n_cells

  static Bathymetry sample(const Grid& grid, const std::function<double(double)>& z) {
    Bathymetry b;
    b.z_nodes.resize(static_cast<std::size_t>(grid.n_nodes()));
    b.z_centers.resize(static_cast<std::size_t>(grid.n_cells()));
    for (int j = 0; j < grid.n_nodes(); ++j) b.z_nodes[j] = z(grid.node(j));
    for (int j = 0; j < grid.n_cells(); ++j) b.z_centers[j] = z(grid.center(j));
    return b;
  }

  static Bathymetry flat(const Grid& grid) {
    return sample(grid, [](double) { return 0.0; });
  }
};

/// Cell averages of (h, q) paired with node point values of (h, u).
struct DualState {
  std::vector<double> avg_h, avg_q;  // over cells
  std::vector<double> pt_h, pt_u;    // over nodes

  DualState() = default;
  explicit DualState(int n_cells)
      : avg_h(static_cast<std::size_t>(n_cells), 0.0),
        avg_q(static_cast<std::size_t>(n_cells), 0.0),
        pt_h(static_cast<std::size_t>(n_cells + 1), 0.0),
        pt_u(static_cast<std::size_t>(n_cells + 1), 0.0) {}

  int n_cells() const { return static_cast<int>(avg_h.size()); }

  bool all_finite() const {
    for (const auto* v : {&avg_h, &avg_q, &pt_h, &pt_u})
      for (double x : *v)
        if (!std::isfinite(x)) return false;
    return true;
  }

  bool depths_nonnegative() const {
    for (double h : avg_h)
      if (!(h >= 0.0)) return false;
    for (double h : pt_h)
      if (!(h >= 0.0)) return false;
    return true;
  }

  friend bool operator==(const DualState&, const DualState&) = default;
};

/// (h, u) -> (h, h u).
inline std::pair<double, double> point_conserved(double pt_h, double pt_u) {
  if (pt_h < 0.0) throw std::domain_error("point_conserved: negative depth");
  return {pt_h, pt_h * pt_u};
}

enum class BoundaryKind { extrapolation, periodic, dirichlet };

/// One side of the domain. Dirichlet pins whichever of h, u is given.
struct BoundarySide {
  BoundaryKind kind = BoundaryKind::extrapolation;
  std::optional<double> h;
  std::optional<double> u;
  // Pin h only while the local Froude number at the boundary node is below one.
  bool h_only_when_subcritical = false;

  static BoundarySide extrapolation() { return {}; }
  static BoundarySide periodic() { return {BoundaryKind::periodic, {}, {}, false}; }
  static BoundarySide dirichlet(std::optional<double> h, std::optional<double> u,
                                bool h_only_when_subcritical = false) {
    return {BoundaryKind::dirichlet, h, u, h_only_when_subcritical};
  }
};

struct BoundaryConditions {
  BoundarySide left;
  BoundarySide right;

  bool periodic() const { return left.kind == BoundaryKind::periodic; }

  void validate(const SchemeConfig& config) const {
    if ((left.kind == BoundaryKind::periodic) != (right.kind == BoundaryKind::periodic))
      throw ConfigError("periodic boundaries must be set on both sides");
    if (periodic() && config.manning_n != 0.0)
      throw ConfigError("periodic boundaries require manning_n = 0");
  }
};

/// Array indexed over an inclusive integer range that may start below zero.
class PaddedArray {
 public:
  PaddedArray() = default;
  PaddedArray(int first, int last, double fill = 0.0)
      : first_(first), data_(static_cast<std::size_t>(last - first + 1), fill) {}

  double& operator[](int i) { return data_[static_cast<std::size_t>(i - first_)]; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i - first_)]; }

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(data_.size()) - 1; }

 private:
  int first_ = 0;
  std::vector<double> data_;
};

/// State with one ghost cell and one ghost node on each side:
/// cells -1..n, nodes -1..n+1.
struct GhostedState {
  int n_cells = 0;
  // Ghost cell is a copy of the boundary-node state (Dirichlet sides).
  bool pinned_left = false, pinned_right = false;
  PaddedArray avg_h, avg_q;
  PaddedArray pt_h, pt_u;
  PaddedArray z_nodes, z_centers;
};

/// Fills ghosts by periodic wrap or zero-order extrapolation. A Dirichlet
/// ghost cell takes the pinned boundary-node state.
inline GhostedState with_ghosts(const DualState& s, const Bathymetry& bathy,
                                const BoundaryConditions& bc) {
  const int n = s.n_cells();
  GhostedState g;
  g.n_cells = n;
  g.pinned_left = bc.left.kind == BoundaryKind::dirichlet;
  g.pinned_right = bc.right.kind == BoundaryKind::dirichlet;
  g.avg_h = PaddedArray(-1, n);
  g.avg_q = PaddedArray(-1, n);
  g.z_centers = PaddedArray(-1, n);
  g.pt_h = PaddedArray(-1, n + 1);
  g.pt_u = PaddedArray(-1, n + 1);
  g.z_nodes = PaddedArray(-1, n + 1);
  for (int j = 0; j < n; ++j) {
    g.avg_h[j] = s.avg_h[j];
    g.avg_q[j] = s.avg_q[j];
    g.z_centers[j] = bathy.z_centers[j];
  }
  for (int j = 0; j <= n; ++j) {
    g.pt_h[j] = s.pt_h[j];
    g.pt_u[j] = s.pt_u[j];
    g.z_nodes[j] = bathy.z_nodes[j];
  }
  if (bc.periodic()) {
    g.avg_h[-1] = s.avg_h[n - 1];
    g.avg_q[-1] = s.avg_q[n - 1];
    g.z_centers[-1] = bathy.z_centers[n - 1];
    g.avg_h[n] = s.avg_h[0];
    g.avg_q[n] = s.avg_q[0];
    g.z_centers[n] = bathy.z_centers[0];
    g.pt_h[-1] = s.pt_h[n - 1];
    g.pt_u[-1] = s.pt_u[n - 1];
    g.z_nodes[-1] = bathy.z_nodes[n - 1];
    g.pt_h[n + 1] = s.pt_h[1];
    g.pt_u[n + 1] = s.pt_u[1];
    g.z_nodes[n + 1] = bathy.z_nodes[1];
  } else {
    // A Dirichlet ghost cell carries the pinned boundary-node state.
    auto ghost_cell = [&](const BoundarySide& side, int cell, int node, int ghost) {
      if (side.kind == BoundaryKind::dirichlet) {
        g.avg_h[ghost] = s.pt_h[node];
        g.avg_q[ghost] = s.pt_h[node] * s.pt_u[node];
      } else {
        g.avg_h[ghost] = s.avg_h[cell];
        g.avg_q[ghost] = s.avg_q[cell];
      }
    };
    ghost_cell(bc.left, 0, 0, -1);
    ghost_cell(bc.right, n - 1, n, n);
    g.z_centers[-1] = bathy.z_nodes[0];
    g.z_centers[n] = bathy.z_nodes[n];
    g.pt_h[-1] = s.pt_h[0];
    g.pt_u[-1] = s.pt_u[0];
    g.z_nodes[-1] = bathy.z_nodes[0];
    g.pt_h[n + 1] = s.pt_h[n];
    g.pt_u[n + 1] = s.pt_u[n];
    g.z_nodes[n + 1] = bathy.z_nodes[n];
  }
  return g;
}

}  // namespace wbsw
