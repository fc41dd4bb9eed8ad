#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wbsw/wbsw.hpp"

namespace fs = std::filesystem;
using namespace wbsw;

namespace {

constexpr int exit_solver = 2;
constexpr int exit_config = 3;

fs::path output_root() {
  if (const char* env = std::getenv("WBSW_OUTPUT_ROOT"); env && *env) return env;
  return "output";
}

void print_table(const ErrorTable& t) {
  std::printf("%-12s %-14s %-8s %-14s %-8s\n", "dx", ("L1 " + t.field_1).c_str(), "rate", ("L1 " + t.field_2).c_str(),
              "rate");
  for (const auto& r : t.rows) {
    auto rate = [](const std::optional<double>& v) { return v ? std::to_string(*v).substr(0, 5) : std::string("-"); };
    std::printf("%-12.4e %-14.4e %-8s %-14.4e %-8s\n", r.dx, r.error_1, rate(r.rate_1).c_str(), r.error_2,
                rate(r.rate_2).c_str());
  }
}

void print_wb(const WbSummary& s) {
  std::printf("%-18s cells %-5d t %-6g L1(h) %.3e  Linf(h) %.3e  L1(q) %.3e  Linf(q) %.3e  troubled %ld\n",
              s.scenario.c_str(), s.n_cells, s.t_final, s.errors.h.l1, s.errors.h.linf, s.errors.q.l1,
              s.errors.q.linf, s.stats.troubled_total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-balanced dual FV/RD shallow water solver"};
  app.require_subcommand(1);

  std::string scenario, config_file, out_dir, levels = "64..1024";
  int cells = 0;
  double t_final = -1.0;
  bool no_mood = false;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write snapshots");
  run_cmd->add_option("scenario", scenario, "Scenario id (or 'custom' with --config)");
  run_cmd->add_option("--cells", cells, "Number of cells");
  run_cmd->add_option("--t-final", t_final, "Final time");
  run_cmd->add_flag("--no-mood", no_mood, "Disable a-posteriori limiting");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--config", config_file, "INI run configuration");

  auto* conv_cmd = app.add_subcommand("converge", "Convergence study on Example 1");
  std::string conv_case = "ex1";
  conv_cmd->add_option("case", conv_case, "Only 'ex1' is supported")->check(CLI::IsMember({"ex1", "ex1-accuracy"}));
  conv_cmd->add_option("--levels", levels, "Mesh ladder, e.g. 64..4096 or 64,128,256");
  conv_cmd->add_flag("--no-mood", no_mood, "Disable a-posteriori limiting");
  conv_cmd->add_option("--out", out_dir, "Output directory");

  auto* wb_cmd = app.add_subcommand("wb-check", "Well-balancing check on a steady scenario");
  wb_cmd->add_option("scenario", scenario, "Steady scenario id")->required();
  wb_cmd->add_option("--cells", cells, "Number of cells");
  wb_cmd->add_option("--out", out_dir, "Output directory");

  auto* tab_cmd = app.add_subcommand("tables", "Regenerate the table analogs");
  tab_cmd->add_option("--levels", levels, "Mesh ladder for the convergence table");
  tab_cmd->add_option("--out", out_dir, "Output directory");

  app.add_subcommand("list", "List scenario ids");

  CLI11_PARSE(app, argc, argv);

  try {
    SchemeConfig base;
    if (no_mood) base.mood_enabled = false;

    if (*run_cmd) {
      RunConfig rc = config_file.empty() ? RunConfig{} : load_run_config(config_file);
      if (!scenario.empty()) rc.scenario = scenario;
      if (rc.scenario.empty()) throw ConfigError("run: give a scenario id or a config file naming one");
      if (cells > 0) rc.n_cells = cells;
      if (t_final > 0.0) rc.t_final = t_final;
      if (no_mood) rc.scheme.mood_enabled = false;
      if (!out_dir.empty()) rc.out_dir = out_dir;
      if (rc.out_dir.empty()) rc.out_dir = output_root() / rc.scenario;
      const RunResult r = run(rc);
      std::printf("%s: %d cells, t = %g, %d steps, troubled cells %ld, min depth %.3e\n", r.scenario.name.c_str(),
                  r.scenario.grid.n_cells(), r.t_final, r.stats.steps, r.stats.troubled_total, r.stats.min_depth);
      std::printf("output: %s\n", rc.out_dir.string().c_str());
    } else if (*conv_cmd) {
      const fs::path dir = out_dir.empty() ? output_root() / "converge" : fs::path(out_dir);
      const auto [points, averages] = converge(parse_levels(levels), base, dir);
      std::printf("point values\n");
      print_table(points);
      std::printf("cell averages\n");
      print_table(averages);
      std::printf("output: %s\n", dir.string().c_str());
    } else if (*wb_cmd) {
      const WbSummary s = wb_check(scenario, cells, base);
      print_wb(s);
      if (!out_dir.empty()) write_wb_table(fs::path(out_dir) / "wb_check.csv", {s});
    } else if (*tab_cmd) {
      const fs::path dir = out_dir.empty() ? output_root() / "tables" : fs::path(out_dir);
      tables(dir, base, parse_levels(levels));
      std::printf("tables written to %s\n", dir.string().c_str());
    } else {
      for (const auto& n : scenario_names()) std::printf("%s\n", n.c_str());
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SolverError& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
