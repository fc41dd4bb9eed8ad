#include <gtest/gtest.h>

#include "steady_trials.hpp"

using namespace wbsw;

// Discrete steady states of the full system (any discharge, bottom and
// friction) are zeros of both residual operators.
TEST(WellBalance, RandomSteadyStatesAreFixedPoints) {
  const auto results = wbsw::testing::steady_residuals(100, 20241015);
  ASSERT_EQ(results.size(), 100u);
  int friction = 0, super = 0;
  for (const auto& r : results) {
    EXPECT_LE(r.fv, r.tolerance) << r.trial.describe();
    EXPECT_LE(r.rd, r.tolerance) << r.trial.describe();
    friction += r.trial.manning > 0.0;
    super += r.trial.branch == FlowRegime::supercritical;
  }
  // Both branches and both friction settings are exercised.
  EXPECT_GT(friction, 20);
  EXPECT_LT(friction, 80);
  EXPECT_GT(super, 20);
  EXPECT_LT(super, 80);
}

TEST(WellBalance, StillWaterOverRandomBottom) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const SchemeConfig c;
  for (int trial = 0; trial < 20; ++trial) {
    const Grid grid(0.0, 1.0, 30 + trial);
    const double a = 0.5 * U(rng), k = 1.0 + 5.0 * U(rng);
    const Bathymetry bathy = Bathymetry::sample(grid, [&](double x) { return a * std::sin(k * x); });
    std::vector<double> hn(grid.n_nodes()), hc(grid.n_cells());
    for (int j = 0; j < grid.n_nodes(); ++j) hn[j] = 2.0 - bathy.z_nodes[j];
    for (int j = 0; j < grid.n_cells(); ++j) hc[j] = 2.0 - bathy.z_centers[j];
    const int n = grid.n_cells();
    const BoundaryConditions bc{BoundarySide::dirichlet(hn[0], 0.0), BoundarySide::dirichlet(hn[n], 0.0)};
    const auto eq = assemble_equilibrium(steady_state_from_depths(hn, hc, 0.0), grid, bathy, bc, c);
    const auto fv = fv_rhs(eq, c);
    const auto rd = rd_rhs(eq, c);
    for (double v : fv.d_avg_h) ASSERT_LE(std::abs(v), 1e-12);
    for (double v : fv.d_avg_q) ASSERT_LE(std::abs(v), 1e-12 * c.g * 2.0);
    for (double v : rd.d_pt_h) ASSERT_LE(std::abs(v), 1e-12);
    for (double v : rd.d_pt_u) ASSERT_LE(std::abs(v), 1e-12 * c.g * 2.0);
  }
}
