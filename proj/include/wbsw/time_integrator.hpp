#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <vector>

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/fv_scheme.hpp"
#include "wbsw/grid.hpp"
#include "wbsw/mood.hpp"
#include "wbsw/rd_scheme.hpp"

namespace wbsw {

struct StepRecord {
  double t = 0.0;       // time after the step
  double dt = 0.0;
  double a_max = 0.0;
  int troubled_count = 0;
  std::array<int, 5> troubled_by_reason{};  // indexed by TroubleReason
  double residual = 0.0;  // max |state change| / dt over all unknowns
};

/// Largest |u| + sqrt(g h) over nodes, cell centers and cell averages,
/// floored at 1e-12. The averages are the states the parachute updates
/// diffuse with, so they bound the step too.
inline double max_wave_speed(const EquilibriumField& eq, const SchemeConfig& config) {
  const double eps = config.eps_desing;
  double a = 0.0;
  for (int j = 0; j <= eq.n_cells; ++j) a = std::max(a, wave_speed(eq.h_nodes[j], eq.u_nodes[j], config.g));
  for (int j = 0; j < eq.n_cells; ++j) {
    a = std::max(a, wave_speed(eq.h_centers[j], eq.u_centers[j], config.g));
    const double h = eq.avg_h[j];
    const double q = h >= eps ? eq.avg_q[j] : 0.0;
    a = std::max(a, wave_speed(h, desingularize(q, h, eps), config.g));
  }
  return std::max(a, 1e-12);
}

/// base + weight * ((stage - base) + dt * rate); the difference form keeps a
/// zero rate an exact fixed point.
inline double ssp_combine(double base, double stage, double rate, double weight, double dt) {
  return base + weight * ((stage - base) + dt * rate);
}

inline DualState ssp_combine(const DualState& base, const DualState& stage, const DualState& rate, double weight,
                             double dt) {
  DualState out = base;
  auto mix = [&](std::vector<double>& o, const std::vector<double>& b, const std::vector<double>& s,
                 const std::vector<double>& r) {
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = ssp_combine(b[i], s[i], r[i], weight, dt);
  };
  mix(out.avg_h, base.avg_h, stage.avg_h, rate.avg_h);
  mix(out.avg_q, base.avg_q, stage.avg_q, rate.avg_q);
  mix(out.pt_h, base.pt_h, stage.pt_h, rate.pt_h);
  mix(out.pt_u, base.pt_u, stage.pt_u, rate.pt_u);
  return out;
}

/// Three-stage third-order SSP Runge-Kutta (Shu-Osher form). `rhs(u)` returns
/// du/dt; `after_stage(u)` re-imposes boundary data on each stage result.
template <class State, class Rhs, class AfterStage>
State ssp_rk3_step(const State& u0, double dt, Rhs&& rhs, AfterStage&& after_stage) {
  State u1 = ssp_combine(u0, u0, rhs(u0), 1.0, dt);
  after_stage(u1);
  State u2 = ssp_combine(u0, u1, rhs(u1), 0.25, dt);
  after_stage(u2);
  State u3 = ssp_combine(u0, u2, rhs(u2), 2.0 / 3.0, dt);
  after_stage(u3);
  return u3;
}

template <class State, class Rhs>
State ssp_rk3_step(const State& u0, double dt, Rhs&& rhs) {
  return ssp_rk3_step(u0, dt, std::forward<Rhs>(rhs), [](State&) {});
}

/// Couples the cell-average and point-value updates on one grid and drives
/// the MOOD accept/repair loop.
class Solver {
 public:
  Solver(Grid grid, Bathymetry bathy, BoundaryConditions bc, SchemeConfig config)
      : grid_(grid), bathy_(std::move(bathy)), bc_(bc), config_(config) {
    config_.validate();
    bc_.validate(config_);
    if (static_cast<int>(bathy_.z_nodes.size()) != grid_.n_nodes() ||
        static_cast<int>(bathy_.z_centers.size()) != grid_.n_cells())
      throw ConfigError("bathymetry does not match the grid");
  }

  const Grid& grid() const { return grid_; }
  const Bathymetry& bathymetry() const { return bathy_; }
  const BoundaryConditions& boundaries() const { return bc_; }
  const SchemeConfig& config() const { return config_; }

  EquilibriumField equilibrium(const DualState& s) const { return assemble_equilibrium(s, grid_, bathy_, bc_, config_); }

  /// Semi-discrete right-hand side; `troubled` (per cell, may be empty)
  /// switches adjacent nodes to the parachute updates.
  DualState rhs(const DualState& s, const std::vector<std::uint8_t>& troubled = {}) const {
    const EquilibriumField eq = equilibrium(s);
    const int n = grid_.n_cells();
    const auto flags = troubled.empty() ? std::vector<std::uint8_t>{} : flagged_nodes(troubled, bc_.periodic());
    // The flux through a Dirichlet node is boundary data and stays physical.
    auto fv_flags = flags;
    if (!fv_flags.empty()) {
      if (bc_.left.kind == BoundaryKind::dirichlet) fv_flags[0] = 0;
      if (bc_.right.kind == BoundaryKind::dirichlet) fv_flags[n] = 0;
    }
    FvRhs fv = fv_rhs(eq, config_, fv_flags);
    RdRhs rd = rd_rhs(eq, config_, flags);
    if (bc_.periodic()) {
      rd.d_pt_h[n] = rd.d_pt_h[0];
      rd.d_pt_u[n] = rd.d_pt_u[0];
    }
    if (pins_h(s, bc_.left, 0)) rd.d_pt_h[0] = 0.0;
    if (bc_.left.u) rd.d_pt_u[0] = 0.0;
    if (pins_h(s, bc_.right, n)) rd.d_pt_h[n] = 0.0;
    if (bc_.right.u) rd.d_pt_u[n] = 0.0;
    DualState out;
    out.avg_h = std::move(fv.d_avg_h);
    out.avg_q = std::move(fv.d_avg_q);
    out.pt_h = std::move(rd.d_pt_h);
    out.pt_u = std::move(rd.d_pt_u);
    return out;
  }

  /// Pinned Dirichlet values, periodic node identification and zero
  /// velocity at dry nodes.
  void impose_boundaries(DualState& s) const {
    const int n = grid_.n_cells();
    if (bc_.periodic()) {
      s.pt_h[n] = s.pt_h[0];
      s.pt_u[n] = s.pt_u[0];
    }
    if (pins_h(s, bc_.left, 0)) s.pt_h[0] = *bc_.left.h;
    if (bc_.left.u) s.pt_u[0] = *bc_.left.u;
    if (pins_h(s, bc_.right, n)) s.pt_h[n] = *bc_.right.h;
    if (bc_.right.u) s.pt_u[n] = *bc_.right.u;
    for (int j = 0; j <= n; ++j)
      if (s.pt_h[j] < config_.eps_desing) s.pt_u[j] = 0.0;
  }

  double time_step(const DualState& s, double* a_max_out = nullptr) const {
    const double a = max_wave_speed(equilibrium(s), config_);
    if (a_max_out) *a_max_out = a;
    return config_.cfl * grid_.dx() / a;
  }

  DualState rk3(const DualState& s, double dt, const std::vector<std::uint8_t>& troubled = {}) const {
    return ssp_rk3_step(
        s, dt, [&](const DualState& u) { return rhs(u, troubled); },
        [&](DualState& u) { impose_boundaries(u); });
  }

  struct StepResult {
    DualState state;
    DetectionReport report;
  };

  /// One accepted step: high-order candidate, detection, then recomputation
  /// of the full step with parachute substitutions around flagged cells.
  /// The repaired step is checked again and any newly failing cell joins the
  /// mask, so the loop ends after at most n_cells repairs.
  StepResult step(const DualState& s, double dt) const {
    StepResult r{rk3(s, dt), {}};
    if (!config_.mood_enabled) return r;
    r.report = detect(r.state, s, grid_, bathy_, bc_, config_);
    std::vector<std::uint8_t> mask = r.report.troubled;
    while (r.report.any()) {
      r.state = rk3(s, dt, mask);
      const DetectionReport again = detect(r.state, s, grid_, bathy_, bc_, config_);
      bool grew = false;
      for (int j = 0; j < grid_.n_cells(); ++j) {
        if (again.troubled[j] && !mask[j]) {
          mask[j] = 1;
          r.report.troubled[j] = 1;
          r.report.reasons[j] = again.reasons[j];
          ++r.report.counts[static_cast<int>(again.reasons[j])];
          grew = true;
        }
      }
      if (!grew) break;
    }
    return r;
  }

  /// Advances `state` from t0 to t_final. `observer(state, record)` runs
  /// after every accepted step.
  template <class Observer>
  std::vector<StepRecord> advance(DualState& state, double t0, double t_final, Observer&& observer) const {
    std::vector<StepRecord> log;
    double t = t0;
    impose_boundaries(state);
    while (t < t_final) {
      double a_max = 0.0;
      double dt = time_step(state, &a_max);
      bool last = false;
      if (t + dt >= t_final) {
        dt = t_final - t;
        last = true;
      }
      if (!(dt >= 1e-14 * t_final)) {
        std::ostringstream msg;
        msg << "time step underflow at t=" << t << " (dt=" << dt << ", a_max=" << a_max << ")";
        throw SolverError(msg.str());
      }
      StepResult r = step(state, dt);
      // Wave speeds can grow inside a step near wet/dry fronts; retry with a
      // smaller step before giving up.
      for (int retry = 0; retry < max_retries && !(r.state.all_finite() && r.state.depths_nonnegative()); ++retry) {
        dt *= 0.5;
        last = false;
        r = step(state, dt);
      }
      if (!r.state.all_finite() || !r.state.depths_nonnegative()) {
        std::ostringstream msg;
        msg << "admissibility lost after repair at t=" << t << " (dt=" << dt << ", troubled cells "
            << r.report.troubled_count() << ")";
        throw SolverError(msg.str());
      }
      StepRecord rec;
      rec.dt = dt;
      rec.a_max = a_max;
      rec.troubled_count = r.report.troubled_count();
      rec.troubled_by_reason = r.report.counts;
      rec.residual = max_change(state, r.state) / dt;
      t = last ? t_final : t + dt;
      rec.t = t;
      state = std::move(r.state);
      log.push_back(rec);
      observer(state, rec);
    }
    return log;
  }

  std::vector<StepRecord> advance(DualState& state, double t0, double t_final) const {
    return advance(state, t0, t_final, [](const DualState&, const StepRecord&) {});
  }

 private:
  static constexpr int max_retries = 8;

  bool pins_h(const DualState& s, const BoundarySide& side, int node) const {
    if (side.kind != BoundaryKind::dirichlet || !side.h) return false;
    if (!side.h_only_when_subcritical) return true;
    const double h = s.pt_h[node];
    if (!(h >= config_.eps_desing)) return true;
    return std::abs(s.pt_u[node]) < std::sqrt(config_.g * h);
  }

  static double max_change(const DualState& a, const DualState& b) {
    double m = 0.0;
    auto scan = [&](const std::vector<double>& x, const std::vector<double>& y) {
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    };
    scan(a.avg_h, b.avg_h);
    scan(a.avg_q, b.avg_q);
    scan(a.pt_h, b.pt_h);
    scan(a.pt_u, b.pt_u);
    return m;
  }

  Grid grid_;
  Bathymetry bathy_;
  BoundaryConditions bc_;
  SchemeConfig config_;
};

}  // namespace wbsw
