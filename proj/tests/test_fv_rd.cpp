#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wbsw/wbsw.hpp"

using namespace wbsw;

namespace {

constexpr double g_paper = 9.812;

DualState constant_state(int n, double h, double u) {
  DualState s(n);
  for (int j = 0; j < n; ++j) {
    s.avg_h[j] = h;
    s.avg_q[j] = h * u;
  }
  for (int j = 0; j <= n; ++j) {
    s.pt_h[j] = h;
    s.pt_u[j] = u;
  }
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Smooth periodic data on [0, 1]: exact node values and 5-point Gauss cell means.
struct Manufactured {
  static double h(double x) { return 1.0 + 0.2 * std::sin(2 * std::numbers::pi * x); }
  static double u(double x) { return 0.3 + 0.1 * std::cos(2 * std::numbers::pi * x); }
  static double z(double x) { return 0.1 * std::cos(2 * std::numbers::pi * x); }
  static double hx(double x) { return 0.4 * std::numbers::pi * std::cos(2 * std::numbers::pi * x); }
  static double ux(double x) { return -0.2 * std::numbers::pi * std::sin(2 * std::numbers::pi * x); }
  static double zx(double x) { return -0.2 * std::numbers::pi * std::sin(2 * std::numbers::pi * x); }

  template <class F>
  static double cell_mean(F f, double a, double b) {
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += 0.5 * ws[k] * f(0.5 * (a + b) + 0.5 * (b - a) * xs[k]);
    return s;
  }

  static DualState state(const Grid& grid) {
    const int n = grid.n_cells();
    DualState s(n);
    for (int j = 0; j <= n; ++j) {
      s.pt_h[j] = h(grid.node(j));
      s.pt_u[j] = u(grid.node(j));
    }
    for (int j = 0; j < n; ++j) {
      s.avg_h[j] = cell_mean(h, grid.node(j), grid.node(j + 1));
      s.avg_q[j] = cell_mean([](double x) { return h(x) * u(x); }, grid.node(j), grid.node(j + 1));
    }
    return s;
  }
};

const BoundaryConditions periodic_bc{BoundarySide::periodic(), BoundarySide::periodic()};

}  // namespace

TEST(FvScheme, FluxAtNode) {
  const SchemeConfig c;
  auto [a, b] = flux_at_node(2.0, 0.0, c);
  EXPECT_EQ(a, 0.0);
  EXPECT_DOUBLE_EQ(b, 19.624);
  std::tie(a, b) = flux_at_node(0.0, 7.0, c);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
  std::tie(a, b) = flux_at_node(2.0, 12.0, c);
  EXPECT_DOUBLE_EQ(a, 24.0);
  EXPECT_DOUBLE_EQ(b, 288.0 + 4.906 * 4.0);
  EXPECT_DOUBLE_EQ(b, 307.624);
  EXPECT_THROW(flux_at_node(-1.0, 0.0, c), std::domain_error);
}

TEST(FvScheme, SourceVanishesOnConstantState) {
  const Grid grid(0.0, 1.0, 8);
  const SchemeConfig c;
  const auto eq = assemble_equilibrium(constant_state(8, 2.0, 1.0), grid, Bathymetry::flat(grid), {}, c);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(source_average(eq, c, j), 0.0, 1e-13);
}

TEST(FvScheme, LakeAtRestSourceOverLinearBottom) {
  // Z = 0.2 x, w = 1, dx = 0.5: cell 0 has Z 0 -> 0.1 and h 1 -> 0.9.
  const Grid grid(0.0, 2.0, 4);
  const Bathymetry bathy = Bathymetry::sample(grid, [](double x) { return 0.2 * x; });
  DualState s(4);
  for (int j = 0; j <= 4; ++j) s.pt_h[j] = 1.0 - bathy.z_nodes[j];
  for (int j = 0; j < 4; ++j) s.avg_h[j] = 1.0 - bathy.z_centers[j];
  const SchemeConfig c;
  const auto eq = assemble_equilibrium(s, grid, bathy, {}, c);
  const double expected = 0.5 * g_paper * (0.81 - 1.0) / 0.5;
  EXPECT_NEAR(expected, -1.86428, 1e-12);
  EXPECT_NEAR(source_average(eq, c, 0), -1.86428, 1e-12);
  const auto rhs = fv_rhs(eq, c);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(rhs.d_avg_h[j], 0.0);
    EXPECT_NEAR(rhs.d_avg_q[j], 0.0, 1e-13);
  }
}

TEST(FvScheme, SteadySourceEqualsFluxPart) {
  const SchemeConfig c;
  const Scenario sc = build("ex3b-steady", 100, c);
  const auto eq = assemble_equilibrium(sc.initial, sc.grid, sc.bathymetry, sc.bc, c);
  for (int j = 0; j < 100; ++j) {
    const double hl = eq.h_nodes[j], ul = eq.u_nodes[j], hr = eq.h_nodes[j + 1], ur = eq.u_nodes[j + 1];
    const double flux = (hr * ur * ur - hl * ul * ul + 0.5 * c.g * (hr * hr - hl * hl)) / sc.grid.dx();
    EXPECT_NEAR(source_average(eq, c, j), flux, 1e-12 * std::max(1.0, std::abs(flux)));
  }
}

TEST(FvScheme, ConstantStateGivesZero) {
  const Grid grid(0.0, 1.0, 8);
  const SchemeConfig c;
  const auto rhs = fv_rhs(assemble_equilibrium(constant_state(8, 1.7, -0.4), grid, Bathymetry::flat(grid), {}, c), c);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(rhs.d_avg_h[j], 0.0, 1e-12);
    EXPECT_NEAR(rhs.d_avg_q[j], 0.0, 1e-12);
  }
}

TEST(FvScheme, DepthStepHandComputed) {
  // Nodes h = 2,2,2,1,1, averages 2,2,1.5,1, u = 0, flat, dx = 1.
  // Cell 2: flux difference -(g/2)(1 - 4) = 14.718; the source is zero on a flat bottom.
  const Grid grid(0.0, 4.0, 4);
  DualState s(4);
  s.pt_h = {2.0, 2.0, 2.0, 1.0, 1.0};
  s.avg_h = {2.0, 2.0, 1.5, 1.0};
  const SchemeConfig c;
  const auto eq = assemble_equilibrium(s, grid, Bathymetry::flat(grid), {}, c);
  EXPECT_NEAR(source_average(eq, c, 2), 0.0, 1e-13);
  const auto rhs = fv_rhs(eq, c);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(rhs.d_avg_h[j], 0.0);
  EXPECT_NEAR(rhs.d_avg_q[2], 14.718, 1e-12);
  EXPECT_NEAR(rhs.d_avg_q[0], 0.0, 1e-13);
  EXPECT_NEAR(rhs.d_avg_q[1], 0.0, 1e-13);
  EXPECT_NEAR(rhs.d_avg_q[3], 0.0, 1e-13);
}

TEST(FvScheme, MassConservationPeriodic) {
  const Grid grid(0.0, 1.0, 64);
  const Bathymetry bathy = Bathymetry::sample(grid, Manufactured::z);
  const SchemeConfig c;
  const auto rhs = fv_rhs(assemble_equilibrium(Manufactured::state(grid), grid, bathy, periodic_bc, c), c);
  double sum = 0.0, scale = 0.0;
  for (double v : rhs.d_avg_h) {
    sum += v;
    scale += std::abs(v);
  }
  EXPECT_LE(std::abs(sum), 1e-14 * scale);
}

TEST(FvScheme, ManufacturedOrder) {
  const SchemeConfig c;
  double prev = 0.0;
  for (int n = 32; n <= 256; n *= 2) {
    const Grid grid(0.0, 1.0, n);
    const Bathymetry bathy = Bathymetry::sample(grid, Manufactured::z);
    const auto rhs = fv_rhs(assemble_equilibrium(Manufactured::state(grid), grid, bathy, periodic_bc, c), c);
    double err = 0.0;
    using M = Manufactured;
    auto F2 = [&](double x) { return M::h(x) * M::u(x) * M::u(x) + 0.5 * c.g * M::h(x) * M::h(x); };
    for (int j = 0; j < n; ++j) {
      const double a = grid.node(j), b = grid.node(j + 1);
      const double mass = -(M::h(b) * M::u(b) - M::h(a) * M::u(a)) / grid.dx();
      const double src = M::cell_mean([&](double x) { return c.g * M::h(x) * M::zx(x); }, a, b);
      const double mom = -(F2(b) - F2(a)) / grid.dx() - src;
      err = std::max({err, std::abs(rhs.d_avg_h[j] - mass), std::abs(rhs.d_avg_q[j] - mom)});
    }
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / err), 2.7) << "n = " << n;
    }
    prev = err;
  }
}

TEST(RdScheme, OneSidedDeltasLinearAndQuadratic) {
  const int n = 8;
  const double dx = 0.25;
  for (int power = 1; power <= 2; ++power) {
    EquilibriumField eq;
    eq.n_cells = n;
    eq.dx = dx;
    eq.q_nodes = eq.E_nodes = PaddedArray(-1, n + 1);
    eq.q_centers = eq.E_centers = PaddedArray(-1, n);
    auto f = [&](double x) { return power == 1 ? x : x * x; };
    for (int j = -1; j <= n + 1; ++j) eq.q_nodes[j] = eq.E_nodes[j] = f(1.0 + j * dx);
    for (int j = -1; j <= n; ++j) eq.q_centers[j] = eq.E_centers[j] = f(1.0 + (j + 0.5) * dx);
    for (int j = 0; j <= n; ++j) {
      const double x = 1.0 + j * dx;
      const double exact = power == 1 ? 1.0 : 2.0 * x;
      const auto d = one_sided_deltas(eq, j);
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(d.delta_plus[k], exact, 8 * std::numeric_limits<double>::epsilon() * 16.0 / dx);
        EXPECT_NEAR(d.delta_minus[k], exact, 8 * std::numeric_limits<double>::epsilon() * 16.0 / dx);
      }
    }
  }
}

TEST(RdScheme, ConstantFieldDeltasAreZero) {
  const Grid grid(0.0, 1.0, 8);
  const auto eq = assemble_equilibrium(constant_state(8, 1.3, 0.4), grid, Bathymetry::flat(grid), {}, SchemeConfig{});
  for (int j = 0; j <= 8; ++j) {
    const auto d = one_sided_deltas(eq, j);
    // Round-off only: E passes through the center interpolant.
    EXPECT_NEAR(d.delta_plus[0], 0.0, 1e-12);
    EXPECT_NEAR(d.delta_plus[1], 0.0, 1e-12);
    EXPECT_NEAR(d.delta_minus[0], 0.0, 1e-12);
    EXPECT_NEAR(d.delta_minus[1], 0.0, 1e-12);
  }
}

TEST(RdScheme, SplitJacobianSupercritical) {
  const auto J = split_jacobian(2.0, 12.0, SchemeConfig{});
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(J.j_plus[r][k], r == k ? 1.0 : 0.0);
      EXPECT_EQ(J.j_minus[r][k], 0.0);
    }
}

TEST(RdScheme, SplitJacobianStillWater) {
  const SchemeConfig c;
  const auto [plus, minus] = split_ratios(1.0, 0.0, c);
  EXPECT_EQ(plus[0], 0.0);
  EXPECT_EQ(plus[1], 1.0);
  EXPECT_EQ(minus[0], 1.0);
  EXPECT_EQ(minus[1], 0.0);
  const auto J = split_jacobian(1.0, 0.0, c);
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(J.j_plus[r][k] + J.j_minus[r][k], r == k ? 1.0 : 0.0, 1e-15);
  // Hand value: plus = R diag(0, 1) R^{-1} = [[1/2, s/2], [1/(2s), 1/2]], s = sqrt(1/g).
  const double s = std::sqrt(1.0 / g_paper);
  EXPECT_NEAR(J.j_plus[0][1], 0.5 * s, 1e-15);
  EXPECT_NEAR(J.j_plus[1][0], 0.5 / s, 1e-14);
}

TEST(RdScheme, SplitJacobianSonicIsBounded) {
  const SchemeConfig c;
  const double h = 1.0, u = std::sqrt(g_paper * h);
  const auto [plus, minus] = split_ratios(h, u, c);
  EXPECT_NEAR(plus[0], 0.5, 1e-12);
  EXPECT_NEAR(minus[0], 0.5, 1e-12);
  EXPECT_EQ(plus[1], 1.0);
  const auto J = split_jacobian(h, u, c);
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) {
      EXPECT_TRUE(std::isfinite(J.j_plus[r][k]));
      EXPECT_LE(std::abs(J.j_plus[r][k]), 2.0);
      EXPECT_LE(std::abs(J.j_minus[r][k]), 2.0);
    }
}

TEST(RdScheme, SplitJacobianDryFallback) {
  const auto J = split_jacobian(0.0, 3.0, SchemeConfig{});
  EXPECT_EQ(J.j_plus[0][0], 0.5);
  EXPECT_EQ(J.j_plus[1][1], 0.5);
  EXPECT_EQ(J.j_plus[0][1], 0.0);
  EXPECT_EQ(J.j_minus[1][0], 0.0);
  EXPECT_THROW(split_jacobian(-1.0, 0.0, SchemeConfig{}), std::domain_error);
}

// 10^4 random states: ratios in [0, 1] summing to 1, plus + minus = I away
// from sonic points, characteristic-scaled entries bounded by 1.
TEST(RdScheme, SplitJacobianProperties) {
  const SchemeConfig c;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logh(-12.0, 2.0), ud(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double h = std::pow(10.0, logh(rng)), u = ud(rng);
    const auto J = split_jacobian(h, u, c);
    const auto [plus, minus] = split_ratios(h, u, c);
    const double cc = std::sqrt(c.g * h), eps_f = c.entropy_fix_eps * (std::abs(u) + cc);
    const bool regular = std::abs(u - cc) >= eps_f && std::abs(u + cc) >= eps_f;
    for (int k = 0; k < 2; ++k) {
      ASSERT_GE(plus[k], 0.0);
      ASSERT_LE(plus[k], 1.0);
      ASSERT_NEAR(plus[k] + minus[k], 1.0, 1e-15);
    }
    const double s = std::sqrt(h / c.g);
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 2; ++k) {
        ASSERT_TRUE(std::isfinite(J.j_plus[r][k]) && std::isfinite(J.j_minus[r][k]));
        if (regular) {
          ASSERT_NEAR(J.j_plus[r][k] + J.j_minus[r][k], r == k ? 1.0 : 0.0, 1e-12 * (1.0 + 1.0 / s));
        }
        // diag(1/s, 1) J diag(s, 1) has entries (a+b)/2 and (b-a)/2.
        const double scale = (r == 0 ? 1.0 / s : 1.0) * (k == 0 ? s : 1.0);
        ASSERT_LE(std::abs(J.j_plus[r][k] * scale), 1.0 + 1e-12);
        ASSERT_LE(std::abs(J.j_minus[r][k] * scale), 1.0 + 1e-12);
      }
    // Diagonal entries and the (1,2) entry stay within 2 on the whole range.
    ASSERT_LE(std::abs(J.j_plus[0][0]), 2.0);
    ASSERT_LE(std::abs(J.j_plus[1][1]), 2.0);
    ASSERT_LE(std::abs(J.j_plus[0][1]), 2.0);
  }
}

TEST(RdScheme, ConstantStateGivesZero) {
  const Grid grid(0.0, 1.0, 8);
  const auto rhs = rd_rhs(assemble_equilibrium(constant_state(8, 1.1, 2.5), grid, Bathymetry::flat(grid), {}, SchemeConfig{}),
                          SchemeConfig{});
  EXPECT_LE(max_abs(rhs.d_pt_h), 1e-12);
  EXPECT_LE(max_abs(rhs.d_pt_u), 1e-12);
}

TEST(RdScheme, SteadyDataGivesZero) {
  const SchemeConfig c;
  for (const char* name : {"ex3a-steady", "ex3b-steady", "ex3c-steady", "ex2-lake-at-rest"}) {
    const Scenario sc = build(name, 100, c);
    const auto eq = assemble_equilibrium(sc.initial, sc.grid, sc.bathymetry, sc.bc, c);
    const auto rd = rd_rhs(eq, c);
    const auto fv = fv_rhs(eq, c);
    const double scale = std::max(1.0, eq.E_nodes[0]);
    EXPECT_LE(max_abs(rd.d_pt_h), 1e-12 * scale) << name;
    EXPECT_LE(max_abs(rd.d_pt_u), 1e-12 * scale) << name;
    EXPECT_LE(max_abs(fv.d_avg_h), 1e-12 * scale) << name;
    EXPECT_LE(max_abs(fv.d_avg_q), 1e-12 * scale) << name;
  }
}

// The one-sided stencils carry O(dx^2) errors of equal sign on both sides,
// so the point-value residual is second order in truncation.
TEST(RdScheme, ManufacturedOrder) {
  const SchemeConfig c;
  using M = Manufactured;
  double prev = 0.0;
  for (int n = 32; n <= 256; n *= 2) {
    const Grid grid(0.0, 1.0, n);
    const Bathymetry bathy = Bathymetry::sample(grid, M::z);
    const auto rhs = rd_rhs(assemble_equilibrium(M::state(grid), grid, bathy, periodic_bc, c), c);
    double err = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double x = grid.node(j);
      const double qx = M::hx(x) * M::u(x) + M::h(x) * M::ux(x);
      const double Ex = M::u(x) * M::ux(x) + c.g * (M::hx(x) + M::zx(x));
      err = std::max({err, std::abs(rhs.d_pt_h[j] + qx), std::abs(rhs.d_pt_u[j] + Ex)});
    }
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / err), 1.9) << "n = " << n;
    }
    prev = err;
  }
}
