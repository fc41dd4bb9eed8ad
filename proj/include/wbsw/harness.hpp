#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "wbsw/io.hpp"
#include "wbsw/scenarios.hpp"
#include "wbsw/time_integrator.hpp"

namespace wbsw {

/// Registered scenario or the inline Riemann problem of a run config.
inline Scenario scenario_for(const RunConfig& rc) {
  if (rc.custom) {
    RiemannSetup r = *rc.custom;
    if (rc.n_cells > 0) r.n_cells = rc.n_cells;
    if (rc.t_final) r.t_final = *rc.t_final;
    if (rc.manning_n) r.manning_n = *rc.manning_n;
    Scenario sc = riemann_scenario(r);
    sc.snapshot_times = {sc.t_final};
    return sc;
  }
  if (rc.scenario.empty()) throw ConfigError("no scenario given");
  return build(rc.scenario, rc.n_cells, rc.scheme);
}

struct RunStats {
  int steps = 0;
  long troubled_total = 0;
  int troubled_max = 0;
  int steps_with_troubled = 0;
  std::array<long, 5> by_reason{};
  double min_depth = std::numeric_limits<double>::infinity();
  double last_residual = 0.0;

  void add(const DualState& s, const StepRecord& r) {
    ++steps;
    troubled_total += r.troubled_count;
    troubled_max = std::max(troubled_max, r.troubled_count);
    if (r.troubled_count > 0) ++steps_with_troubled;
    for (int k = 0; k < 5; ++k) by_reason[k] += r.troubled_by_reason[k];
    for (double h : s.avg_h) min_depth = std::min(min_depth, h);
    for (double h : s.pt_h) min_depth = std::min(min_depth, h);
    last_residual = r.residual;
  }

  nlohmann::ordered_json to_json() const {
    return {{"steps", steps},
            {"troubled_cells_total", troubled_total},
            {"troubled_cells_max_per_step", troubled_max},
            {"steps_with_troubled_cells", steps_with_troubled},
            {"troubled_by_reason",
             {{"nan_or_inf", by_reason[1]},
              {"negative_depth", by_reason[2]},
              {"new_extremum", by_reason[3]},
              {"speed_jump", by_reason[4]}}},
            {"min_depth", min_depth},
            {"last_residual", last_residual}};
  }
};

struct WbErrors {
  Norms h, q;

  nlohmann::ordered_json to_json() const {
    return {{"L1_h", h.l1}, {"Linf_h", h.linf}, {"L1_q", q.l1}, {"Linf_q", q.linf}};
  }
};

inline WbErrors average_errors(const DualState& a, const DualState& b, double dx) {
  return {norms(a.avg_h, b.avg_h, dx), norms(a.avg_q, b.avg_q, dx)};
}

struct RunResult {
  Scenario scenario;
  SchemeConfig scheme;
  double t_final = 0.0;
  DualState final_state;
  std::vector<StepRecord> log;
  RunStats stats;
  nlohmann::ordered_json summary;
};

/// Runs one scenario to t_final, writing snapshots, the step log and a JSON
/// sidecar into rc.out_dir (nothing is written when it is empty).
inline RunResult run(const RunConfig& rc) {
  RunResult res{scenario_for(rc), {}, 0.0, {}, {}, {}, {}};
  const Scenario& sc = res.scenario;
  res.scheme = sc.scheme(rc.scheme);
  if (rc.manning_n) res.scheme.manning_n = *rc.manning_n;
  res.t_final = rc.t_final.value_or(sc.t_final);
  rc.validate(res.t_final);

  std::vector<double> snaps;
  if (rc.snapshot_times) {
    snaps = *rc.snapshot_times;
  } else {
    for (double t : sc.snapshot_times)
      if (t <= res.t_final) snaps.push_back(t);
    if (snaps.empty() || snaps.back() < res.t_final) snaps.push_back(res.t_final);
  }

  const Solver solver(sc.grid, sc.bathymetry, sc.bc, res.scheme);
  const bool write = !rc.out_dir.empty();
  nlohmann::ordered_json snap_json = nlohmann::ordered_json::array();
  auto snapshot = [&](const DualState& s, double t) {
    if (!write || !rc.emit_snapshots) return;
    char stem[32];
    std::snprintf(stem, sizeof stem, "snapshot_%03d", static_cast<int>(snap_json.size()));
    const auto eq = solver.equilibrium(s);
    write_cells_csv(rc.out_dir / (std::string(stem) + "_cells.csv"), sc.grid, sc.bathymetry, s, eq);
    write_nodes_csv(rc.out_dir / (std::string(stem) + "_nodes.csv"), sc.grid, s, eq);
    snap_json.push_back({{"t", t}, {"cells", std::string(stem) + "_cells.csv"}, {"nodes", std::string(stem) + "_nodes.csv"}});
  };

  DualState state = sc.initial;
  double t = 0.0;
  auto observe = [&](const DualState& s, const StepRecord& r) { res.stats.add(s, r); };
  auto go = [&](double t1) {
    if (t1 <= t) return;
    auto part = solver.advance(state, t, t1, observe);
    res.log.insert(res.log.end(), part.begin(), part.end());
    t = t1;
  };
  for (double ts : snaps) {
    go(ts);
    snapshot(ts == 0.0 ? sc.initial : state, ts);
  }
  go(res.t_final);
  res.final_state = state;

  auto& j = res.summary;
  j["scenario"] = sc.name;
  j["n_cells"] = sc.grid.n_cells();
  j["x_left"] = sc.grid.x_left();
  j["x_right"] = sc.grid.x_right();
  j["t_final"] = res.t_final;
  j["scheme"] = to_json(res.scheme);
  j["stats"] = res.stats.to_json();
  if (sc.background) j["errors_vs_background"] = average_errors(state, *sc.background, sc.grid.dx()).to_json();
  if (sc.exact) {
    const DualState ex = sc.exact(res.t_final);
    j["errors_vs_exact"] = average_errors(state, ex, sc.grid.dx()).to_json();
  }
  j["snapshots"] = snap_json;
  // Steady state under a perturbation, for difference plots.
  if (write && rc.emit_snapshots && sc.background) {
    write_cells_csv(rc.out_dir / "background_cells.csv", sc.grid, sc.bathymetry, *sc.background,
                    solver.equilibrium(*sc.background));
    j["background"] = "background_cells.csv";
  }
  if (write) {
    write_step_log(rc.out_dir / "steps.csv", res.log);
    write_json(rc.out_dir / "run.json", j);
  }
  return res;
}

/// Steady scenario run to its final time; errors of the averages against
/// the discrete steady state it started from.
struct WbSummary {
  std::string scenario;
  int n_cells = 0;
  double t_final = 0.0;
  WbErrors errors;
  RunStats stats;
};

inline WbSummary wb_check(const std::string& name, int n_cells, const SchemeConfig& base) {
  RunConfig rc;
  rc.scenario = name;
  rc.n_cells = n_cells;
  rc.scheme = base;
  const Scenario probe = build(name, n_cells, base);
  if (!probe.steady || !probe.background) throw ConfigError("'" + name + "' is not a steady scenario");
  const RunResult r = run(rc);
  return {name, r.scenario.grid.n_cells(), r.t_final,
          average_errors(r.final_state, *r.scenario.background, r.scenario.grid.dx()), r.stats};
}

/// Example 1 on each mesh of `levels` (doubling), levels run concurrently.
inline std::vector<LevelSolution> run_ladder(const std::vector<int>& levels, const SchemeConfig& base,
                                             const std::string& name = "ex1-accuracy") {
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (levels[k] != 2 * levels[k - 1]) throw ConfigError("convergence levels must double");
  if (levels.size() < 3) throw ConfigError("convergence needs at least three levels");
  std::vector<std::future<LevelSolution>> jobs;
  for (int n : levels) {
    jobs.push_back(std::async(std::launch::async, [n, &base, &name] {
      const Scenario sc = build(name, n, base);
      const Solver solver(sc.grid, sc.bathymetry, sc.bc, sc.scheme(base));
      DualState s = sc.initial;
      solver.advance(s, 0.0, sc.t_final);
      return LevelSolution{n, sc.grid.dx(), std::move(s)};
    }));
  }
  std::vector<LevelSolution> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// "64..1024" (powers of two) or "64,128,256".
inline std::vector<int> parse_levels(const std::string& spec) {
  std::vector<int> out;
  const auto dots = spec.find("..");
  auto to_int = [&](const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || v < 4 || v > (1L << 24)) throw ConfigError("bad level '" + s + "'");
    return static_cast<int>(v);
  };
  if (dots != std::string::npos) {
    const int lo = to_int(spec.substr(0, dots));
    const int hi = to_int(spec.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty level range '" + spec + "'");
    for (int n = lo; n <= hi; n *= 2) out.push_back(n);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  }
  return out;
}

inline std::pair<ErrorTable, ErrorTable> converge(const std::vector<int>& levels, const SchemeConfig& base,
                                                  const std::filesystem::path& out_dir = {}) {
  auto tables = convergence_tables(run_ladder(levels, base));
  if (!out_dir.empty()) {
    write_error_table(out_dir / "convergence_points.csv", tables.first);
    write_error_table(out_dir / "convergence_averages.csv", tables.second);
  }
  return tables;
}

inline void write_wb_table(const std::filesystem::path& path, const std::vector<WbSummary>& rows) {
  auto out = detail::open_out(path);
  out << "scenario,n_cells,t_final,L1_h,Linf_h,L1_q,Linf_q,troubled_cells_total\n";
  for (const auto& r : rows)
    out << r.scenario << ',' << r.n_cells << ',' << detail::fmt(r.t_final) << ',' << detail::fmt(r.errors.h.l1) << ','
        << detail::fmt(r.errors.h.linf) << ',' << detail::fmt(r.errors.q.l1) << ',' << detail::fmt(r.errors.q.linf)
        << ',' << r.stats.troubled_total << '\n';
  detail::finish(out, path);
}

/// Regenerates the still-water, moving-water and convergence tables.
inline void tables(const std::filesystem::path& out_dir, const SchemeConfig& base, const std::vector<int>& levels) {
  std::vector<WbSummary> still{wb_check("ex2-lake-at-rest", 0, base)};
  write_wb_table(out_dir / "table_still_water.csv", still);
  std::vector<WbSummary> moving;
  for (const char* name : {"ex3a-steady", "ex3b-steady", "ex3c-steady"}) moving.push_back(wb_check(name, 0, base));
  write_wb_table(out_dir / "table_moving_water.csv", moving);
  std::vector<WbSummary> step;
  for (const char* name : {"appE-t1a-steady", "appE-t1b-steady", "appE-t1c-steady"})
    step.push_back(wb_check(name, 0, base));
  write_wb_table(out_dir / "table_step_bottom.csv", step);
  converge(levels, base, out_dir);
}

}  // namespace wbsw
