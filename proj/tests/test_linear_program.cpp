#include <gtest/gtest.h>

#include <random>

#include "gdv/optim/linear_program.hpp"

using gdv::optim::LinearProgram;
using gdv::optim::LpOutcome;
using gdv::optim::LpStatus;
using gdv::optim::solve_lp;

namespace {

double row_dot(const std::vector<double>& a, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double r = 0.0;
  for (std::size_t i = 0; i < lp.a_ub.size(); ++i) r = std::max(r, row_dot(lp.a_ub[i], x) - lp.b_ub[i]);
  for (std::size_t i = 0; i < lp.a_eq.size(); ++i) r = std::max(r, std::abs(row_dot(lp.a_eq[i], x) - lp.b_eq[i]));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (lp.lower[j]) r = std::max(r, *lp.lower[j] - x[j]);
  }
  return r;
}

// Dual feasibility: A_ub^T y + A_eq^T w - r = c, with r = 0 on free variables.
double dual_residual(const LinearProgram& lp, const LpOutcome& out) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    double s = -lp.objective[j] - out.reduced[j];
    for (std::size_t i = 0; i < lp.a_ub.size(); ++i) s += out.dual_ub[i] * lp.a_ub[i][j];
    for (std::size_t i = 0; i < lp.a_eq.size(); ++i) s += out.dual_eq[i] * lp.a_eq[i][j];
    worst = std::max(worst, std::abs(s));
    if (!lp.lower[j]) worst = std::max(worst, std::abs(out.reduced[j]));
  }
  for (double y : out.dual_ub) worst = std::max(worst, -y);
  return worst;
}

// y >= 0 on a_ub and bound rows with y^T A = 0 and y^T b < 0.
void expect_farkas(const LinearProgram& lp, const LpOutcome& out) {
  ASSERT_EQ(out.status, LpStatus::infeasible);
  double rhs = 0.0;
  for (std::size_t i = 0; i < lp.a_ub.size(); ++i) {
    EXPECT_GE(out.farkas_ub[i], 0.0);
    rhs += out.farkas_ub[i] * lp.b_ub[i];
  }
  for (std::size_t i = 0; i < lp.a_eq.size(); ++i) rhs += out.farkas_eq[i] * lp.b_eq[i];
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < lp.a_ub.size(); ++i) col += out.farkas_ub[i] * lp.a_ub[i][j];
    for (std::size_t i = 0; i < lp.a_eq.size(); ++i) col += out.farkas_eq[i] * lp.a_eq[i][j];
    if (lp.lower[j]) {
      EXPECT_GE(out.farkas_lower[j], 0.0);
      col -= out.farkas_lower[j];
      rhs -= out.farkas_lower[j] * *lp.lower[j];
    }
    EXPECT_NEAR(col, 0.0, 1e-9);
  }
  EXPECT_LT(rhs, -1e-12);
}

}  // namespace

TEST(LinearProgram, MaxWithUpperBound) {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.add_le({1.0}, 1.0);
  auto out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  EXPECT_NEAR(out.value, 1.0, 1e-12);
  EXPECT_NEAR(out.dual_value, 1.0, 1e-12);
}

TEST(LinearProgram, InfeasibleHasFarkasCertificate) {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.add_le({1.0}, -1.0);
  expect_farkas(lp, solve_lp(lp));
}

TEST(LinearProgram, UnboundedHasImprovingRay) {
  LinearProgram lp(1);
  lp.objective = {1.0};
  auto out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::unbounded);
  ASSERT_EQ(out.ray.size(), 1u);
  EXPECT_GT(out.ray[0], 0.0);
}

TEST(LinearProgram, UnboundedRayIsFeasibleDirection) {
  // max x + y, x - y <= 1, x free, y >= 0
  LinearProgram lp(2);
  lp.lower[0] = std::nullopt;
  lp.objective = {1.0, 1.0};
  lp.add_le({1.0, -1.0}, 1.0);
  auto out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::unbounded);
  EXPECT_LE(out.ray[0] - out.ray[1], 1e-12);
  EXPECT_GE(out.ray[1], -1e-12);
  EXPECT_GT(out.ray[0] + out.ray[1], 0.0);
  EXPECT_LE(primal_residual(lp, out.primal), 1e-9);
}

TEST(LinearProgram, FreeVariablesAndEqualities) {
  // max -|x - 3| style: min t s.t. t >= x - 3, t >= 3 - x, x + y = 5, y >= 4
  LinearProgram lp(3);  // t, x, y
  lp.lower[0] = std::nullopt;
  lp.lower[1] = std::nullopt;
  lp.lower[2] = 4.0;
  lp.objective = {-1.0, 0.0, 0.0};
  lp.add_le({-1.0, 1.0, 0.0}, 3.0);
  lp.add_le({-1.0, -1.0, 0.0}, -3.0);
  lp.add_eq({0.0, 1.0, 1.0}, 5.0);
  auto out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  // x <= 1 forces t >= 2
  EXPECT_NEAR(out.value, -2.0, 1e-10);
  EXPECT_NEAR(out.primal[1], 1.0, 1e-10);
  EXPECT_NEAR(out.dual_value, out.value, 1e-10);
  EXPECT_LE(dual_residual(lp, out), 1e-9);
}

TEST(LinearProgram, InfeasibleWithBoundsAndEqualities) {
  // x + y = 6 with x <= 2, y <= 2, x, y >= 0
  LinearProgram lp(2);
  lp.add_eq({1.0, 1.0}, 6.0);
  lp.add_le({1.0, 0.0}, 2.0);
  lp.add_le({0.0, 1.0}, 2.0);
  expect_farkas(lp, solve_lp(lp));
}

TEST(LinearProgram, InfeasibleWithShiftedLowerBound) {
  // x >= 3 but x <= 1
  LinearProgram lp(1);
  lp.lower[0] = 3.0;
  lp.add_le({1.0}, 1.0);
  expect_farkas(lp, solve_lp(lp));
}

TEST(LinearProgram, BealeCyclingExampleTerminates) {
  // Classic degenerate instance on which textbook Dantzig pricing cycles.
  LinearProgram lp(4);
  lp.objective = {0.75, -150.0, 0.02, -6.0};
  lp.add_le({0.25, -60.0, -0.04, 9.0}, 0.0);
  lp.add_le({0.5, -90.0, -0.02, 3.0}, 0.0);
  lp.add_le({0.0, 0.0, 1.0, 0.0}, 1.0);
  auto out = solve_lp(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  EXPECT_NEAR(out.value, 0.05, 1e-10);
}

TEST(LinearProgram, RejectsNonFiniteAndMismatchedInput) {
  LinearProgram lp(2);
  lp.add_le({1.0}, 1.0);
  EXPECT_THROW(solve_lp(lp), gdv::DimensionError);
  LinearProgram bad(1);
  bad.objective = {std::numeric_limits<double>::infinity()};
  EXPECT_THROW(solve_lp(bad), gdv::InvalidArgument);
}

// Property: on random bounded feasible LPs the returned primal and dual are
// feasible and their objectives agree (strong duality), which certifies
// optimality independently of the pivoting path.
TEST(LinearProgram, RandomStrongDuality) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 6, m = 1 + trial % 7;
    LinearProgram lp(n);
    std::vector<double> x0(n);
    for (double& v : x0) v = 0.5 * (u(rng) + 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      lp.objective[j] = u(rng);
      if (trial % 3 == 0 && j == 0) lp.lower[j] = std::nullopt;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (double& v : row) v = u(rng);
      const double b = row_dot(row, x0) + 0.3 * (u(rng) + 1.0);
      lp.add_le(std::move(row), b);
    }
    if (trial % 2 == 0) {
      std::vector<double> row(n);
      for (double& v : row) v = u(rng);
      lp.add_eq(row, row_dot(row, x0));
    }
    // box keeps it bounded
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      lp.add_le(row, 5.0);
      row[j] = -1.0;
      lp.add_le(row, 5.0);
    }
    auto out = solve_lp(lp);
    ASSERT_EQ(out.status, LpStatus::optimal) << "trial " << trial;
    EXPECT_LE(primal_residual(lp, out.primal), 1e-9) << "trial " << trial;
    EXPECT_LE(dual_residual(lp, out), 1e-9) << "trial " << trial;
    EXPECT_NEAR(out.value, out.dual_value, 1e-8 * std::max(1.0, std::abs(out.value))) << "trial " << trial;
  }
}

TEST(LinearProgram, RandomInfeasibleSystemsCertified) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int certified = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4;
    LinearProgram lp(n);
    // a . x <= -1 together with x >= 0 and a >= 0 entries is infeasible
    std::vector<double> a(n);
    for (double& v : a) v = 0.5 * (u(rng) + 1.0) + 0.01;
    lp.add_le(a, -0.5 - 0.5 * (u(rng) + 1.0));
    for (int extra = 0; extra < trial % 3; ++extra) {
      std::vector<double> row(n);
      for (double& v : row) v = u(rng);
      lp.add_le(std::move(row), u(rng));
    }
    auto out = solve_lp(lp);
    expect_farkas(lp, out);
    ++certified;
  }
  EXPECT_EQ(certified, 200);
}
