#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/grid.hpp"

namespace wbsw {

// ---------------------------------------------------------------------------
// Bathymetries

namespace bathymetry {

/// Smooth parabolic hump of height 0.2 on [8, 12].
inline double hump(double x) { return (x >= 8.0 && x <= 12.0) ? 0.2 - 0.05 * (x - 10.0) * (x - 10.0) : 0.0; }

/// Rectangular step of height 0.2 on [8, 12].
inline double step(double x) { return (x >= 8.0 && x <= 12.0) ? 0.2 : 0.0; }

/// Two cosine bumps on [-1, 1], heights 4 and 1.
inline double double_bump(double x) {
  constexpr double pi = std::numbers::pi;
  if (x >= -0.4 && x <= -0.2) return 2.0 * (std::cos(10.0 * pi * (x + 0.3)) + 1.0);
  if (x >= 0.2 && x <= 0.4) return 0.5 * (std::cos(10.0 * pi * (x - 0.3)) + 1.0);
  return 0.0;
}

/// Periodic cosine bottom on [0, 1].
inline double cosine(double x) { return 0.2 * (1.0 + std::cos(6.0 * std::numbers::pi * x)); }

/// Unit step at x = 0.
inline double step_at_zero(double x) { return x >= 0.0 ? 1.0 : 0.0; }

inline double flat(double) { return 0.0; }

inline std::function<double(double)> by_name(const std::string& name) {
  if (name == "flat") return flat;
  if (name == "hump") return hump;
  if (name == "step") return step;
  if (name == "double-bump") return double_bump;
  if (name == "cosine") return cosine;
  if (name == "step-at-zero") return step_at_zero;
  throw ConfigError("unknown bathymetry '" + name + "'");
}

}  // namespace bathymetry

// ---------------------------------------------------------------------------
// Steady depths

enum class FlowRegime { subcritical, supercritical, transcritical };

/// Region treated as the crest for transcritical profiles: subcritical
/// upstream of `lo`, supercritical downstream of `hi`, critical in between.
struct CrestZone {
  double lo;
  double hi;
};

/// Frictionless steady depth from the trigonometric roots of
/// h^3 + a0 h^2 + a2 = 0 with a0 = (gZ - E)/g, a2 = q^2/(2g).
inline double steady_depth_cubic(double q_eq, double E_eq, double Z, FlowRegime regime, double x, CrestZone crest,
                                 const SchemeConfig& config) {
  const double g = config.g;
  const double a0 = (g * Z - E_eq) / g;
  const double a2 = q_eq * q_eq / (2.0 * g);
  if (q_eq == 0.0) {
    if (regime == FlowRegime::supercritical) throw std::domain_error("steady_depth_cubic: no supercritical still-water root");
    return -a0;
  }
  double arg = 1.0 + 27.0 * a2 / (2.0 * a0 * a0 * a0);
  if (!(arg >= -1.0 - 1e-12 && arg <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "steady_depth_cubic: no physical root (trigonometric argument " << arg << ")";
    throw std::domain_error(msg.str());
  }
  arg = std::clamp(arg, -1.0, 1.0);
  const double theta = std::acos(arg);
  // The small root cancels in 2 cos(.) + 1; two Newton steps on the cubic restore its digits.
  auto p = [&](double h) { return h * h * (h + a0) + a2; };
  auto polish = [&](double h) {
    for (int k = 0; k < 2; ++k) {
      const double d = h * (3.0 * h + 2.0 * a0);
      if (d == 0.0) break;
      const double next = h - p(h) / d;
      if (!(std::abs(p(next)) < std::abs(p(h)))) break;  // near the double root
      h = next;
    }
    return h;
  };
  const double sub = polish(-a0 / 3.0 * (2.0 * std::cos(theta / 3.0) + 1.0));
  const double super = polish(-a0 / 3.0 * (2.0 * std::cos((theta + 4.0 * std::numbers::pi) / 3.0) + 1.0));
  switch (regime) {
    case FlowRegime::subcritical:
      return sub;
    case FlowRegime::supercritical:
      return super;
    case FlowRegime::transcritical:
      if (x < crest.lo) return sub;
      if (x > crest.hi) return super;
      return crest.lo == crest.hi ? -2.0 * a0 / 3.0 : std::cbrt(q_eq * q_eq / g);
  }
  return sub;
}

inline double steady_depth_cubic(double q_eq, double E_eq, double Z, FlowRegime regime, double x, double x_crest,
                                 const SchemeConfig& config) {
  return steady_depth_cubic(q_eq, E_eq, Z, regime, x, CrestZone{x_crest, x_crest}, config);
}

/// Depth h on the requested branch with q^2/(2h^2) + g(h + Z) + Q = E, by
/// Newton iteration started from the side where the iterates are monotone.
inline double newton_depth_from_equilibrium(double q, double E, double Z, double Q, FlowRegime branch,
                                            const SchemeConfig& config) {
  const double g = config.g;
  const double head = E - g * Z - Q;  // q^2/(2h^2) + g h
  const double tol = 1e-12 * std::max(1.0, std::abs(E));
  auto residual = [&](double h) { return q * q / (2.0 * h * h) + g * h - head; };
  if (branch == FlowRegime::transcritical) throw std::domain_error("newton_depth_from_equilibrium: pick a branch");
  if (q == 0.0) {
    if (branch == FlowRegime::supercritical || !(head > 0.0))
      throw std::domain_error("newton_depth_from_equilibrium: no still-water root on this branch");
    return head / g;
  }
  const double h_crit = std::cbrt(q * q / g);
  if (residual(h_crit) > tol) {
    std::ostringstream msg;
    msg << "newton_depth_from_equilibrium: energy below critical (residual at critical depth " << residual(h_crit)
        << ")";
    throw std::domain_error(msg.str());
  }
  double h = branch == FlowRegime::subcritical ? head / g : std::abs(q) / std::sqrt(2.0 * head);
  double r = residual(h);
  // Iterate to round-off, not just to tol: steady data built from these
  // depths must be a fixed point of the discrete operators.
  for (int it = 0; it < 100; ++it) {
    const double slope = g - q * q / (h * h * h);
    if (slope == 0.0) break;
    const double next = h - r / slope;
    const double step = std::abs(next - h);
    h = next;
    r = residual(h);
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * h && std::abs(r) <= tol) return h;
  }
  if (std::abs(r) <= tol) return h;
  std::ostringstream msg;
  msg << "newton_depth_from_equilibrium: no convergence, last residual " << r;
  throw std::domain_error(msg.str());
}

/// Steady data whose reconstructed center depth equals h_center exactly.
inline double steady_cell_average(double left, double center, double right) {
  return (2.0 / 3.0) * center + (1.0 / 6.0) * (left + right);
}

/// Discrete moving-water equilibrium from node and center depths.
inline DualState steady_state_from_depths(const std::vector<double>& h_nodes, const std::vector<double>& h_centers,
                                          double q) {
  const int n = static_cast<int>(h_centers.size());
  DualState s(n);
  for (int j = 0; j <= n; ++j) {
    s.pt_h[j] = h_nodes[j];
    s.pt_u[j] = q / h_nodes[j];
  }
  for (int j = 0; j < n; ++j) {
    const double ql = s.pt_h[j] * s.pt_u[j];
    const double qr = s.pt_h[j + 1] * s.pt_u[j + 1];
    s.avg_h[j] = steady_cell_average(h_nodes[j], h_centers[j], h_nodes[j + 1]);
    s.avg_q[j] = steady_cell_average(ql, q, qr);
  }
  return s;
}

/// Frictionless steady profile from the cubic roots at nodes and centers.
inline DualState steady_state_cubic(const Grid& grid, const Bathymetry& bathy, double q, double E, FlowRegime regime,
                                    CrestZone crest, const SchemeConfig& config) {
  std::vector<double> hn(static_cast<std::size_t>(grid.n_nodes())), hc(static_cast<std::size_t>(grid.n_cells()));
  for (int j = 0; j < grid.n_nodes(); ++j)
    hn[j] = steady_depth_cubic(q, E, bathy.z_nodes[j], regime, grid.node(j), crest, config);
  for (int j = 0; j < grid.n_cells(); ++j)
    hc[j] = steady_depth_cubic(q, E, bathy.z_centers[j], regime, grid.center(j), crest, config);
  return steady_state_from_depths(hn, hc, q);
}

/// Steady profile with friction: alternate Newton solves at every node and
/// center with recomputation of the friction integral from the current
/// profile until a sweep changes no depth by more than 1e-12.
inline DualState steady_state_newton(const Grid& grid, const Bathymetry& bathy, double q, double E, FlowRegime branch,
                                     const SchemeConfig& config) {
  const int n = grid.n_cells();
  std::vector<double> hn(static_cast<std::size_t>(n + 1)), hc(static_cast<std::size_t>(n));
  std::vector<double> Qn(static_cast<std::size_t>(n + 1), 0.0), Qc(static_cast<std::size_t>(n), 0.0);
  if (config.manning_n != 0.0) {
    // March left to right so Q never runs ahead of the depths it integrates;
    // a global start from Q = 0 overshoots and can cross critical depth.
    const double eps = config.eps_desing;
    const double c = config.g * config.manning_n * config.manning_n * grid.dx();
    auto s = [&](double h) { return friction_integrand(h, q, eps); };
    hn[0] = newton_depth_from_equilibrium(q, E, bathy.z_nodes[0], 0.0, branch, config);
    for (int j = 0; j < n; ++j) {
      double hl = hn[j], hc_j = hl, hr = hl;
      for (int it = 0; it < 200; ++it) {
        const double avg = steady_cell_average(hl, hc_j, hr);
        const double hq = interpolate_quarter(hl, avg, hr);
        Qc[j] = Qn[j] + c / 12.0 * (s(hl) + s(hc_j) + 4.0 * s(hq));
        Qn[j + 1] = Qn[j] + c / 6.0 * (s(hl) + s(hr) + 4.0 * s(hc_j));
        const double c_new = newton_depth_from_equilibrium(q, E, bathy.z_centers[j], Qc[j], branch, config);
        const double r_new = newton_depth_from_equilibrium(q, E, bathy.z_nodes[j + 1], Qn[j + 1], branch, config);
        const double change = std::max(std::abs(c_new - hc_j), std::abs(r_new - hr));
        hc_j = c_new;
        hr = r_new;
        if (change <= 1e-14 * std::max(1.0, hr)) break;
      }
      hc[j] = hc_j;
      hn[j + 1] = hr;
    }
  }
  double last_change = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 500; ++sweep) {
    double change = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double h = newton_depth_from_equilibrium(q, E, bathy.z_nodes[j], Qn[j], branch, config);
      if (sweep > 0) change = std::max(change, std::abs(h - hn[j]));
      hn[j] = h;
    }
    for (int j = 0; j < n; ++j) {
      const double h = newton_depth_from_equilibrium(q, E, bathy.z_centers[j], Qc[j], branch, config);
      if (sweep > 0) change = std::max(change, std::abs(h - hc[j]));
      hc[j] = h;
    }
    // Converged once the sweeps stop improving below 1e-12.
    if (sweep > 0 && change <= 1e-12 && (change <= 1e-15 || change >= last_change))
      return steady_state_from_depths(hn, hc, q);
    if (sweep > 0) last_change = change;
    if (config.manning_n == 0.0 && sweep > 0) return steady_state_from_depths(hn, hc, q);
    const FrictionIntegral Q = compute_Q(steady_state_from_depths(hn, hc, q), grid, bathy, BoundaryConditions{}, config);
    for (int j = 0; j <= n; ++j) Qn[j] = Q.nodes[j];
    for (int j = 0; j < n; ++j) Qc[j] = Q.centers[j];
  }
  throw std::domain_error("steady_state_newton: friction sweeps did not converge");
}

// ---------------------------------------------------------------------------
// Exact dam break over a flat bottom with still water on both sides.

class DambreakSolution {
 public:
  DambreakSolution(double h_l, double h_r, double g) : h_l_(h_l), h_r_(h_r), g_(g) {
    if (!(h_l >= h_r && h_r >= 0.0)) throw std::domain_error("dam break needs h_l >= h_r >= 0");
    c_l_ = std::sqrt(g * h_l);
    if (h_l == h_r) {
      h_m_ = h_l;
      u_m_ = 0.0;
      shock_speed_ = 0.0;
    } else if (h_r == 0.0) {
      h_m_ = 0.0;
      u_m_ = 2.0 * c_l_;
      shock_speed_ = 2.0 * c_l_;
    } else {
      double lo = h_r, hi = h_l;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * h_l; ++it) {
        const double mid = 0.5 * (lo + hi);
        (matching(mid) > 0.0 ? lo : hi) = mid;
      }
      h_m_ = 0.5 * (lo + hi);
      u_m_ = 2.0 * (c_l_ - std::sqrt(g * h_m_));
      shock_speed_ = h_m_ * u_m_ / (h_m_ - h_r_);
    }
  }

  /// Rarefaction/shock matching condition for the intermediate depth.
  double matching(double h) const {
    return 2.0 * (c_l_ - std::sqrt(g_ * h)) - (h - h_r_) * std::sqrt(g_ * (h + h_r_) / (2.0 * h * h_r_));
  }

  double intermediate_depth() const { return h_m_; }
  double intermediate_velocity() const { return u_m_; }
  double shock_speed() const { return shock_speed_; }

  std::pair<double, double> at(double x, double t) const {
    if (h_l_ == h_r_) return {h_l_, 0.0};
    if (t <= 0.0) return x < 0.0 ? std::pair{h_l_, 0.0} : std::pair{h_r_, 0.0};
    const double xi = x / t;
    if (xi < -c_l_) return {h_l_, 0.0};
    const double tail = u_m_ - std::sqrt(g_ * h_m_);
    if (xi < tail || (h_r_ == 0.0 && xi < 2.0 * c_l_)) {
      const double c = (2.0 * c_l_ - xi) / 3.0;
      return {c * c / g_, 2.0 / 3.0 * (c_l_ + xi)};
    }
    if (h_r_ > 0.0 && xi < shock_speed_) return {h_m_, u_m_};
    return {h_r_, 0.0};
  }

  /// Exact (h, q) averaged over [a, b], split at the wave edges.
  std::pair<double, double> average(double a, double b, double t) const {
    std::vector<double> cuts{a, b};
    if (t > 0.0) {
      for (double v : {-c_l_ * t, (u_m_ - std::sqrt(g_ * h_m_)) * t, shock_speed_ * t})
        if (v > a && v < b) cuts.push_back(v);
    }
    std::sort(cuts.begin(), cuts.end());
    static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double sh = 0.0, sq = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double m = 0.5 * (cuts[k] + cuts[k + 1]), r = 0.5 * (cuts[k + 1] - cuts[k]);
      for (std::size_t i = 0; i < 3; ++i) {
        const auto [h, u] = at(m + r * nodes[i], t);
        sh += weights[i] * r * h;
        sq += weights[i] * r * h * u;
      }
    }
    return {sh / (b - a), sq / (b - a)};
  }

 private:
  double h_l_, h_r_, g_;
  double c_l_ = 0.0;
  double h_m_ = 0.0, u_m_ = 0.0, shock_speed_ = 0.0;
};

inline std::pair<double, double> exact_dambreak(double h_l, double h_r, double x, double t,
                                                const SchemeConfig& config) {
  return DambreakSolution(h_l, h_r, config.g).at(x, t);
}

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  std::string name;
  Grid grid;
  Bathymetry bathymetry;
  BoundaryConditions bc;
  DualState initial;
  double manning_n = 0.0;
  double t_final = 0.0;
  std::vector<double> snapshot_times;
  /// Discrete steady state the run should stay at (steady runs) or that the
  /// perturbation rides on (perturbation runs).
  std::optional<DualState> background;
  /// Exact solution at time t sampled on the grid, when known.
  std::function<DualState(double)> exact;
  bool steady = false;

  SchemeConfig scheme(SchemeConfig base) const {
    base.manning_n = manning_n;
    return base;
  }
};

namespace detail {

// Evaluate a possibly discontinuous profile just inside [a, b].
inline double inside_right(double a, double b) { return std::nextafter(a, b); }
inline double inside_left(double a, double b) { return std::nextafter(b, a); }

}  // namespace detail

/// Point values at nodes and per-cell Simpson averages (node, center, node)
/// from analytic depth and velocity profiles.
inline DualState sample_initial(const Grid& grid, const std::function<double(double)>& h,
                                const std::function<double(double)>& u) {
  const int n = grid.n_cells();
  DualState s(n);
  for (int j = 0; j <= n; ++j) {
    s.pt_h[j] = h(grid.node(j));
    s.pt_u[j] = u(grid.node(j));
  }
  for (int j = 0; j < n; ++j) {
    const double a = detail::inside_right(grid.node(j), grid.node(j + 1));
    const double b = detail::inside_left(grid.node(j), grid.node(j + 1));
    const double c = grid.center(j);
    s.avg_h[j] = (h(a) + 4.0 * h(c) + h(b)) / 6.0;
    s.avg_q[j] = (h(a) * u(a) + 4.0 * h(c) * u(c) + h(b) * u(b)) / 6.0;
  }
  return s;
}

struct RiemannSetup {
  std::string name = "custom";
  double x_left = 0.0, x_right = 1.0;
  int n_cells = 100;
  double interface = 0.5;
  double h_left = 1.0, u_left = 0.0, h_right = 1.0, u_right = 0.0;
  bool depth_is_surface = false;  // h_left/h_right give h + Z instead of h
  std::string bathymetry = "flat";
  BoundaryConditions bc;
  double manning_n = 0.0;
  double t_final = 1.0;
};

inline Scenario riemann_scenario(const RiemannSetup& r) {
  const Grid grid(r.x_left, r.x_right, r.n_cells);
  const auto z = bathymetry::by_name(r.bathymetry);
  Scenario sc{r.name, grid, Bathymetry::sample(grid, z), r.bc, {}, r.manning_n, r.t_final, {r.t_final}, {}, {}, false};
  auto h = [&](double x) {
    const double v = x < r.interface ? r.h_left : r.h_right;
    return r.depth_is_surface ? std::max(v - z(x), 0.0) : v;
  };
  auto u = [&](double x) { return x < r.interface ? r.u_left : r.u_right; };
  sc.initial = sample_initial(grid, h, u);
  return sc;
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "ex1-accuracy",       "ex2-lake-at-rest",   "ex2-perturbation",   "ex3a-steady",        "ex3b-steady",
      "ex3c-steady",        "ex3a-perturbation",  "ex3b-perturbation",  "ex3c-perturbation",  "ex4a",
      "ex4b",               "ex4c",               "ex4d",               "ex5-dambreak",       "ex6-dry-riemann",
      "ex7a",               "ex7b",               "ex7d",               "ex8a-steady",        "ex8b-steady",
      "ex8a-perturbation",  "ex8b-perturbation",  "appE-t1a-steady",    "appE-t1b-steady",    "appE-t1c-steady",
      "appE-t1a-perturbation", "appE-t1b-perturbation", "appE-t1c-perturbation", "appE-t2a", "appE-t2b",
      "appE-t2c",           "appE-t2d",           "appE-t3-rarefactions"};
  return names;
}

namespace detail {

inline double gaussian_bump(double x, double center, double width) {
  return 1e-3 * std::exp(-width * (x - center) * (x - center));
}

inline void add_to_averages(DualState& s, const Grid& grid, const std::function<double(double)>& f) {
  for (int j = 0; j < grid.n_cells(); ++j) s.avg_h[j] += f(grid.center(j));
}

struct MovingCase {
  double q;
  double E;
  FlowRegime regime;
};

inline MovingCase moving_case(char which, double g) {
  switch (which) {
    case 'a':
      return {24.0, 24.0 * 24.0 / (2.0 * 2.0 * 2.0) + g * 2.0, FlowRegime::supercritical};
    case 'b':
      return {4.42, 4.42 * 4.42 / (2.0 * 2.0 * 2.0) + g * 2.0, FlowRegime::subcritical};
    default:
      return {1.53, 1.5 * std::pow(g * 1.53, 2.0 / 3.0) + g * 0.2, FlowRegime::transcritical};
  }
}

// Steady or perturbed moving-water case over the hump or the step.
inline Scenario moving_water(const std::string& name, char which, bool step_bottom, bool perturbed, int n_cells,
                             const SchemeConfig& config) {
  const Grid grid(0.0, 25.0, n_cells > 0 ? n_cells : 100);
  const Bathymetry bathy = Bathymetry::sample(grid, step_bottom ? bathymetry::step : bathymetry::hump);
  const MovingCase mc = moving_case(which, config.g);
  const CrestZone crest = step_bottom ? CrestZone{8.0, 12.0} : CrestZone{10.0, 10.0};
  DualState steady = steady_state_cubic(grid, bathy, mc.q, mc.E, mc.regime, crest, config);
  Scenario sc{name, grid, bathy, {}, steady, 0.0, 20.0, {}, steady, {}, !perturbed};
  if (perturbed) {
    add_to_averages(sc.initial, grid, [](double x) { return gaussian_bump(x, 6.0, 80.0); });
    sc.t_final = which == 'a' ? 1.0 : 1.5;
  }
  sc.snapshot_times = {sc.t_final};
  return sc;
}

// Lake-at-rest start converging to a steady flow under Dirichlet data.
inline Scenario convergence_case(const std::string& name, double surface, BoundarySide left, BoundarySide right,
                                 bool step_bottom, double manning_n, int n_cells) {
  const Grid grid(0.0, 25.0, n_cells > 0 ? n_cells : 200);
  const auto z = step_bottom ? bathymetry::step : bathymetry::hump;
  Scenario sc{name, grid, Bathymetry::sample(grid, z), {left, right}, {}, manning_n, 500.0, {500.0}, {}, {}, false};
  sc.initial = sample_initial(
      grid, [&](double x) { return surface - z(x); }, [](double) { return 0.0; });
  if (left.h) sc.initial.pt_h[0] = *left.h;
  if (left.u) sc.initial.pt_u[0] = *left.u;
  return sc;
}

}  // namespace detail

/// Builds a registered scenario. `n_cells <= 0` selects the scenario's default mesh.
inline Scenario build(const std::string& name, int n_cells, const SchemeConfig& config) {
  const double g = config.g;
  using detail::convergence_case;
  using detail::moving_water;

  if (name == "ex1-accuracy") {
    const Grid grid(0.0, 1.0, n_cells > 0 ? n_cells : 256);
    Scenario sc{name, grid, Bathymetry::sample(grid, bathymetry::cosine),
                {BoundarySide::periodic(), BoundarySide::periodic()}, {}, 0.0, 0.03, {0.03}, {}, {}, false};
    sc.initial = sample_initial(
        grid,
        [](double x) {
          const double d = (x - 0.5) / 0.05;
          return 0.3 * (1.0 + std::exp(-d * d)) - 0.2 * std::cos(6.0 * std::numbers::pi * x);
        },
        [](double) { return 0.0; });
    return sc;
  }
  if (name == "ex2-lake-at-rest" || name == "ex2-perturbation") {
    const Grid grid(-1.0, 1.0, n_cells > 0 ? n_cells : 100);
    const Bathymetry bathy = Bathymetry::sample(grid, bathymetry::double_bump);
    std::vector<double> hn(static_cast<std::size_t>(grid.n_nodes())), hc(static_cast<std::size_t>(grid.n_cells()));
    for (int j = 0; j < grid.n_nodes(); ++j) hn[j] = 4.000001 - bathy.z_nodes[j];
    for (int j = 0; j < grid.n_cells(); ++j) hc[j] = 4.000001 - bathy.z_centers[j];
    const DualState rest = steady_state_from_depths(hn, hc, 0.0);
    const bool perturbed = name == "ex2-perturbation";
    Scenario sc{name, grid, bathy, {}, rest, 0.0, perturbed ? 0.06 : 30.0, {}, rest, {}, !perturbed};
    if (perturbed) {
      detail::add_to_averages(sc.initial, grid, [](double x) { return 1e-3 * std::exp(-200.0 * x * x); });
      sc.snapshot_times = {0.02, 0.04, 0.06};
    } else {
      sc.snapshot_times = {30.0};
    }
    return sc;
  }
  if (name.starts_with("ex3") && name.size() >= 4) {
    const char which = name[3];
    if (which >= 'a' && which <= 'c') {
      if (name.ends_with("-steady")) return moving_water(name, which, false, false, n_cells, config);
      if (name.ends_with("-perturbation")) return moving_water(name, which, false, true, n_cells, config);
    }
  }
  if (name.starts_with("appE-t1") && name.size() >= 8) {
    const char which = name[7];
    if (which >= 'a' && which <= 'c') {
      if (name.ends_with("-steady")) return moving_water(name, which, true, false, n_cells, config);
      if (name.ends_with("-perturbation")) return moving_water(name, which, true, true, n_cells, config);
    }
  }
  if (name == "ex4a" || name == "ex4b" || name == "ex4c" || name == "ex4d" || name == "appE-t2a" ||
      name == "appE-t2b" || name == "appE-t2c" || name == "appE-t2d") {
    const bool step_bottom = name.starts_with("appE");
    const char which = name.back();
    using BS = BoundarySide;
    switch (which) {
      case 'a':
        return convergence_case(name, 2.0, BS::dirichlet(2.0, 12.0), BS::extrapolation(), step_bottom, 0.0, n_cells);
      case 'b':
        return convergence_case(name, 2.0, BS::dirichlet(2.0, 2.21), BS::dirichlet(2.0, std::nullopt), step_bottom,
                                0.0, n_cells);
      case 'c':
        return convergence_case(name, 0.66, BS::dirichlet(1.01439, 1.53 / 1.01439),
                                BS::dirichlet(0.66, std::nullopt, true), step_bottom, 0.0, n_cells);
      default:
        return convergence_case(name, 0.33, BS::dirichlet(0.41372, 0.18 / 0.41372),
                                BS::dirichlet(0.33, std::nullopt), step_bottom, 0.0, n_cells);
    }
  }
  if (name == "ex5-dambreak") {
    RiemannSetup r;
    r.name = name;
    r.x_left = -150.0;
    r.x_right = 150.0;
    r.n_cells = n_cells > 0 ? n_cells : 300;
    r.interface = 0.0;
    r.h_left = 10.0;
    r.h_right = 1.0;
    r.t_final = 8.0;
    Scenario sc = riemann_scenario(r);
    const Grid grid = sc.grid;
    sc.exact = [grid, g](double t) {
      const DambreakSolution sol(10.0, 1.0, g);
      DualState s(grid.n_cells());
      for (int j = 0; j < grid.n_cells(); ++j) {
        const auto [h, q] = sol.average(grid.node(j), grid.node(j + 1), t);
        s.avg_h[j] = h;
        s.avg_q[j] = q;
      }
      for (int j = 0; j <= grid.n_cells(); ++j) {
        const auto [h, u] = sol.at(grid.node(j), t);
        s.pt_h[j] = h;
        s.pt_u[j] = u;
      }
      return s;
    };
    return sc;
  }
  if (name == "ex6-dry-riemann") {
    RiemannSetup r;
    r.name = name;
    r.x_left = 0.0;
    r.x_right = 25.0;
    r.n_cells = n_cells > 0 ? n_cells : 100;
    r.interface = 5.0;
    r.h_left = 2.0;
    r.u_left = 12.0;
    r.h_right = 0.0;
    r.u_right = 0.0;
    r.bathymetry = "hump";
    r.bc = {BoundarySide::dirichlet(2.0, 12.0), BoundarySide::extrapolation()};
    r.t_final = 6.0;
    Scenario sc = riemann_scenario(r);
    sc.snapshot_times = {0.2, 0.5, 1.0, 2.0, 6.0};
    return sc;
  }
  if (name == "ex7a" || name == "ex7b" || name == "ex7d") {
    using BS = BoundarySide;
    switch (name.back()) {
      case 'a':
        return convergence_case(name, 2.0, BS::dirichlet(2.0, 12.0), BS::extrapolation(), false, 0.05, n_cells);
      case 'b':
        return convergence_case(name, 2.0, BS::dirichlet(2.14618, 4.42 / 2.14618), BS::dirichlet(2.0, std::nullopt),
                                false, 0.05, n_cells);
      default:
        return convergence_case(name, 0.33, BS::dirichlet(0.44835, 0.18 / 0.44835), BS::dirichlet(0.32, std::nullopt),
                                false, 0.05, n_cells);
    }
  }
  if (name == "ex8a-steady" || name == "ex8b-steady" || name == "ex8a-perturbation" || name == "ex8b-perturbation") {
    const bool case_a = name[3] == 'a';
    const Grid grid(0.0, 25.0, n_cells > 0 ? n_cells : 200);
    const Bathymetry bathy = Bathymetry::sample(grid, bathymetry::hump);
    SchemeConfig friction = config;
    friction.manning_n = 0.05;
    const double q = case_a ? 24.0 : 4.42;
    const double E = case_a ? 91.624 : 23.17926352161752;
    const DualState steady = steady_state_newton(grid, bathy, q, E,
                                                 case_a ? FlowRegime::supercritical : FlowRegime::subcritical, friction);
    const bool perturbed = name.ends_with("-perturbation");
    // Inflow (and subcritical outflow depth) pinned to the steady state's own boundary values.
    const int n = grid.n_cells();
    BoundaryConditions bc{BoundarySide::dirichlet(steady.pt_h[0], steady.pt_u[0]),
                          case_a ? BoundarySide::extrapolation() : BoundarySide::dirichlet(steady.pt_h[n], std::nullopt)};
    Scenario sc{name, grid, bathy, bc, steady, 0.05, case_a ? 1.0 : 1.5, {}, steady, {}, !perturbed};
    if (perturbed) detail::add_to_averages(sc.initial, grid, [](double x) { return detail::gaussian_bump(x, 6.0, 80.0); });
    sc.snapshot_times = {sc.t_final};
    return sc;
  }
  if (name == "appE-t3-rarefactions") {
    RiemannSetup r;
    r.name = name;
    r.x_left = -150.0;
    r.x_right = 150.0;
    r.n_cells = n_cells > 0 ? n_cells : 300;
    r.interface = 0.0;
    r.h_left = 8.0;
    r.u_left = -2.0;
    r.h_right = 5.0;
    r.u_right = 7.1704;
    r.bathymetry = "step-at-zero";
    r.t_final = 8.0;
    return riemann_scenario(r);
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace wbsw
