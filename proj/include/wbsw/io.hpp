#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/grid.hpp"
#include "wbsw/scenarios.hpp"
#include "wbsw/time_integrator.hpp"

namespace wbsw {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Error measures

/// Runge error estimate from two successive level differences,
/// s12 = |u_dx - u_2dx| and s24 = |u_2dx - u_4dx|.
inline double runge_error(double s12, double s24) {
  if (s12 == s24) throw std::domain_error("runge_error: equal differences give no rate");
  return s12 * s12 / std::abs(s12 - s24);
}

struct Norms {
  double l1 = 0.0;
  double linf = 0.0;
};

inline Norms norms(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  if (a.size() != b.size()) throw std::invalid_argument("norms: length mismatch");
  Norms n;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    n.l1 += d;
    n.linf = std::max(n.linf, d);
  }
  n.l1 *= dx;
  return n;
}

struct ErrorRow {
  double dx = 0.0;
  double error_1 = 0.0;
  std::optional<double> rate_1;
  double error_2 = 0.0;
  std::optional<double> rate_2;
};

/// Errors and rates for two fields (h and u for point values, h and q for
/// cell averages), one row per mesh.
struct ErrorTable {
  std::string kind;  // "points" or "averages"
  std::string field_1, field_2;
  std::vector<ErrorRow> rows;
};

struct LevelSolution {
  int n_cells = 0;
  double dx = 0.0;
  DualState state;
};

namespace detail {

// L1 distance on the coarse mesh between a coarse solution and the next
// finer one: fine nodes 2j sit on coarse node j, two fine cells make one
// coarse cell.
inline std::array<double, 4> level_difference(const LevelSolution& coarse, const LevelSolution& fine) {
  const int n = coarse.n_cells;
  if (fine.n_cells != 2 * n) throw std::invalid_argument("convergence levels must double");
  std::vector<double> ph(n), pu(n), ah(n), aq(n);
  for (int j = 0; j < n; ++j) {
    ph[j] = fine.state.pt_h[2 * j];
    pu[j] = fine.state.pt_u[2 * j];
    ah[j] = 0.5 * (fine.state.avg_h[2 * j] + fine.state.avg_h[2 * j + 1]);
    aq[j] = 0.5 * (fine.state.avg_q[2 * j] + fine.state.avg_q[2 * j + 1]);
  }
  const auto& c = coarse.state;
  // Nodes 0..n-1: on a periodic mesh node n repeats node 0.
  const std::vector<double> ch(c.pt_h.begin(), c.pt_h.begin() + n), cu(c.pt_u.begin(), c.pt_u.begin() + n);
  return {norms(ch, ph, coarse.dx).l1, norms(cu, pu, coarse.dx).l1, norms(c.avg_h, ah, coarse.dx).l1,
          norms(c.avg_q, aq, coarse.dx).l1};
}

}  // namespace detail

/// Runge-formula error tables from solutions on successively doubled
/// meshes (coarse first). Rows start at the third level.
inline std::pair<ErrorTable, ErrorTable> convergence_tables(const std::vector<LevelSolution>& levels) {
  ErrorTable points{"points", "h", "u", {}};
  ErrorTable averages{"averages", "h_avg", "q_avg", {}};
  std::vector<std::array<double, 4>> diffs;
  for (std::size_t k = 1; k < levels.size(); ++k) diffs.push_back(detail::level_difference(levels[k - 1], levels[k]));
  for (std::size_t k = 2; k < levels.size(); ++k) {
    const auto& s12 = diffs[k - 1];
    const auto& s24 = diffs[k - 2];
    ErrorRow p{levels[k].dx, runge_error(s12[0], s24[0]), {}, runge_error(s12[1], s24[1]), {}};
    ErrorRow a{levels[k].dx, runge_error(s12[2], s24[2]), {}, runge_error(s12[3], s24[3]), {}};
    if (!points.rows.empty()) {
      const ErrorRow& pp = points.rows.back();
      const ErrorRow& pa = averages.rows.back();
      p.rate_1 = std::log2(pp.error_1 / p.error_1);
      p.rate_2 = std::log2(pp.error_2 / p.error_2);
      a.rate_1 = std::log2(pa.error_1 / a.error_1);
      a.rate_2 = std::log2(pa.error_2 / a.error_2);
    }
    points.rows.push_back(p);
    averages.rows.push_back(a);
  }
  return {points, averages};
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

/// x_center, h_avg, q_avg, w_avg (= h_avg + Z), E_center.
inline void write_cells_csv(const std::filesystem::path& path, const Grid& grid, const Bathymetry& bathy,
                            const DualState& s, const EquilibriumField& eq) {
  auto out = detail::open_out(path);
  out << "x_center,h_avg,q_avg,w_avg,E_center\n";
  for (int j = 0; j < grid.n_cells(); ++j)
    out << detail::fmt(grid.center(j)) << ',' << detail::fmt(s.avg_h[j]) << ',' << detail::fmt(s.avg_q[j]) << ','
        << detail::fmt(s.avg_h[j] + bathy.z_centers[j]) << ',' << detail::fmt(eq.E_centers[j]) << '\n';
  detail::finish(out, path);
}

/// x_node, h, u, q, E, Q.
inline void write_nodes_csv(const std::filesystem::path& path, const Grid& grid, const DualState& s,
                            const EquilibriumField& eq) {
  auto out = detail::open_out(path);
  out << "x_node,h,u,q,E,Q\n";
  for (int j = 0; j <= grid.n_cells(); ++j)
    out << detail::fmt(grid.node(j)) << ',' << detail::fmt(s.pt_h[j]) << ',' << detail::fmt(s.pt_u[j]) << ','
        << detail::fmt(s.pt_h[j] * s.pt_u[j]) << ',' << detail::fmt(eq.E_nodes[j]) << ','
        << detail::fmt(eq.Q_nodes[j]) << '\n';
  detail::finish(out, path);
}

inline void write_step_log(const std::filesystem::path& path, const std::vector<StepRecord>& log) {
  auto out = detail::open_out(path);
  out << "step,t,dt,a_max,troubled,residual\n";
  for (std::size_t i = 0; i < log.size(); ++i)
    out << i + 1 << ',' << detail::fmt(log[i].t) << ',' << detail::fmt(log[i].dt) << ','
        << detail::fmt(log[i].a_max) << ',' << log[i].troubled_count << ',' << detail::fmt(log[i].residual) << '\n';
  detail::finish(out, path);
}

/// dx, error and rate per field; rates are empty on the first row.
inline void write_error_table(const std::filesystem::path& path, const ErrorTable& t) {
  auto out = detail::open_out(path);
  out << "dx,L1_" << t.field_1 << ",rate_" << t.field_1 << ",L1_" << t.field_2 << ",rate_" << t.field_2 << '\n';
  auto rate = [](const std::optional<double>& r) { return r ? detail::fmt(*r) : std::string(); };
  for (const auto& r : t.rows)
    out << detail::fmt(r.dx) << ',' << detail::fmt(r.error_1) << ',' << rate(r.rate_1) << ','
        << detail::fmt(r.error_2) << ',' << rate(r.rate_2) << '\n';
  detail::finish(out, path);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty fields read as NaN
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  t.header = split(line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": wrong number of fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(std::nan(""));
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0')
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
  detail::finish(out, path);
}

inline nlohmann::ordered_json to_json(const SchemeConfig& c) {
  return {{"g", c.g},
          {"manning_n", c.manning_n},
          {"cfl", c.cfl},
          {"eps_desing", c.eps_desing},
          {"entropy_fix_eps", c.entropy_fix_eps},
          {"switch_C", c.switch_C},
          {"switch_m", c.switch_m},
          {"mood_enabled", c.mood_enabled}};
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  std::string scenario;
  std::optional<RiemannSetup> custom;  // inline Riemann problem instead of a registered id
  int n_cells = 0;                     // 0: scenario default
  std::optional<double> t_final;
  SchemeConfig scheme;
  std::optional<double> manning_n;  // overrides the scenario's value
  std::filesystem::path out_dir;
  std::optional<std::vector<double>> snapshot_times;
  bool emit_snapshots = true;
  bool emit_tables = false;

  void validate(double final_time) const {
    scheme.validate();
    if (n_cells != 0 && n_cells < 4) throw ConfigError("cells must be at least 4");
    if (!(final_time > 0.0)) throw ConfigError("t_final must be positive");
    if (snapshot_times) {
      if (!std::is_sorted(snapshot_times->begin(), snapshot_times->end()))
        throw ConfigError("snapshot times must be sorted");
      for (double t : *snapshot_times)
        if (!(t >= 0.0 && t <= final_time)) throw ConfigError("snapshot time outside [0, t_final]");
    }
  }
};

namespace detail {

using boost::property_tree::ptree;

inline double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return x;
}

inline int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "': expected an integer");
  return static_cast<int>(x);
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError("'" + key + "': expected a boolean, got '" + v + "'");
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

inline BoundarySide side_from(const ptree& sec, const std::string& prefix) {
  const std::string kind = sec.get<std::string>(prefix, "extrapolation");
  if (kind == "extrapolation") return BoundarySide::extrapolation();
  if (kind == "periodic") return BoundarySide::periodic();
  if (kind != "dirichlet") throw ConfigError("'" + prefix + "': unknown boundary kind '" + kind + "'");
  std::optional<double> h, u;
  if (auto v = sec.get_optional<std::string>(prefix + "_h")) h = to_double(prefix + "_h", *v);
  if (auto v = sec.get_optional<std::string>(prefix + "_u")) u = to_double(prefix + "_u", *v);
  bool sub = false;
  if (auto v = sec.get_optional<std::string>(prefix + "_h_subcritical_only"))
    sub = to_bool(prefix + "_h_subcritical_only", *v);
  if (!h && !u) throw ConfigError("'" + prefix + "': dirichlet side needs " + prefix + "_h or " + prefix + "_u");
  return BoundarySide::dirichlet(h, u, sub);
}

inline void check_keys(const ptree& sec, const std::string& section, const std::vector<std::string>& allowed) {
  for (const auto& [key, child] : sec) {
    if (!child.empty()) throw ConfigError("[" + section + "]: nested key '" + key + "'");
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("[" + section + "]: unknown key '" + key + "'");
  }
}

}  // namespace detail

/// Reads an INI-style run description:
///
///   [run]      scenario, cells, t_final, snapshots (comma list), out, mood,
///              emit_snapshots, emit_tables
///   [scheme]   g, manning_n, cfl, eps_desing, entropy_fix_eps, switch_C, switch_m
///   [riemann]  custom two-state problem, used when scenario = custom
inline RunConfig parse_run_config(std::istream& in) {
  detail::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig rc;
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) throw ConfigError("key '" + name + "' outside a section");
    if (name != "run" && name != "scheme" && name != "riemann") throw ConfigError("unknown section [" + name + "]");
  }
  auto str = [](const detail::ptree& sec, const std::string& key) { return sec.get_optional<std::string>(key); };

  if (auto run = tree.get_child_optional("run")) {
    detail::check_keys(*run, "run",
                       {"scenario", "cells", "t_final", "snapshots", "out", "mood", "emit_snapshots", "emit_tables"});
    if (auto v = str(*run, "scenario")) rc.scenario = *v;
    if (auto v = str(*run, "cells")) rc.n_cells = detail::to_int("cells", *v);
    if (auto v = str(*run, "t_final")) rc.t_final = detail::to_double("t_final", *v);
    if (auto v = str(*run, "snapshots")) rc.snapshot_times = detail::to_list("snapshots", *v);
    if (auto v = str(*run, "out")) rc.out_dir = *v;
    if (auto v = str(*run, "mood")) rc.scheme.mood_enabled = detail::to_bool("mood", *v);
    if (auto v = str(*run, "emit_snapshots")) rc.emit_snapshots = detail::to_bool("emit_snapshots", *v);
    if (auto v = str(*run, "emit_tables")) rc.emit_tables = detail::to_bool("emit_tables", *v);
  }
  if (auto sch = tree.get_child_optional("scheme")) {
    detail::check_keys(*sch, "scheme",
                       {"g", "manning_n", "cfl", "eps_desing", "entropy_fix_eps", "switch_C", "switch_m"});
    if (auto v = str(*sch, "g")) rc.scheme.g = detail::to_double("g", *v);
    if (auto v = str(*sch, "manning_n")) rc.manning_n = detail::to_double("manning_n", *v);
    if (auto v = str(*sch, "cfl")) rc.scheme.cfl = detail::to_double("cfl", *v);
    if (auto v = str(*sch, "eps_desing")) rc.scheme.eps_desing = detail::to_double("eps_desing", *v);
    if (auto v = str(*sch, "entropy_fix_eps")) rc.scheme.entropy_fix_eps = detail::to_double("entropy_fix_eps", *v);
    if (auto v = str(*sch, "switch_C")) rc.scheme.switch_C = detail::to_double("switch_C", *v);
    if (auto v = str(*sch, "switch_m")) rc.scheme.switch_m = detail::to_int("switch_m", *v);
  }
  if (auto rie = tree.get_child_optional("riemann")) {
    detail::check_keys(*rie, "riemann",
                       {"x_left", "x_right", "interface", "h_left", "u_left", "h_right", "u_right", "surface",
                        "bathymetry", "left", "left_h", "left_u", "left_h_subcritical_only", "right", "right_h",
                        "right_u", "right_h_subcritical_only"});
    RiemannSetup r;
    auto num = [&](const char* key, double& dst) {
      if (auto v = str(*rie, key)) dst = detail::to_double(key, *v);
    };
    num("x_left", r.x_left);
    num("x_right", r.x_right);
    num("interface", r.interface);
    num("h_left", r.h_left);
    num("u_left", r.u_left);
    num("h_right", r.h_right);
    num("u_right", r.u_right);
    if (auto v = str(*rie, "surface")) r.depth_is_surface = detail::to_bool("surface", *v);
    if (auto v = str(*rie, "bathymetry")) r.bathymetry = *v;
    r.bc = {detail::side_from(*rie, "left"), detail::side_from(*rie, "right")};
    rc.custom = r;
  }
  if (rc.scenario == "custom" && !rc.custom) throw ConfigError("scenario = custom needs a [riemann] section");
  if (rc.custom && rc.scenario.empty()) rc.scenario = "custom";
  if (rc.custom && rc.scenario != "custom") throw ConfigError("[riemann] given but scenario is '" + rc.scenario + "'");
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_run_config(in);
}

}  // namespace wbsw
