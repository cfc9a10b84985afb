#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

namespace {

using namespace drsd;
using drsd::testing::minimize_over_vertices;
using drsd::testing::polytope_of;
using drsd::testing::random_lp;

TEST(SolveLp, BoundOnlyProblem) {
  LpProblem lp = LpProblem::with_variables(1);
  lp.cost = {1.0};
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.primal[0], 0.0, 1e-12);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
}

TEST(SolveLp, SingleRowDual) {
  LpProblem lp = LpProblem::with_variables(1);
  lp.cost = {-1.0};
  lp.add_row(std::vector<double>{1.0}, RowSense::LessEqual, 1.0);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, -1.0, 1e-12);
  EXPECT_NEAR(s.duals[0], -1.0, 1e-12);
}

TEST(SolveLp, RecourseSubproblemOfT1) {
  // min y s.t. y − s = 2; basic solutions are (y, s) = (2, 0) only.
  LpProblem lp = LpProblem::with_variables(2);
  lp.cost = {1.0, 0.0};
  lp.add_row(std::vector<double>{1.0, -1.0}, RowSense::Equal, 2.0);
  const auto oracle = minimize_over_vertices(polytope_of(lp), lp.cost);
  ASSERT_TRUE(oracle.feasible);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, oracle.value, 1e-12);
  EXPECT_NEAR(s.objective, 2.0, 1e-12);
  EXPECT_NEAR(s.primal[0], 2.0, 1e-12);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-12);
}

TEST(SolveLp, DetectsInfeasibility) {
  LpProblem lp = LpProblem::with_variables(2);
  lp.add_row(std::vector<double>{1.0, 1.0}, RowSense::LessEqual, 1.0);
  lp.add_row(std::vector<double>{1.0, 1.0}, RowSense::GreaterEqual, 2.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(SolveLp, DetectsUnboundedness) {
  LpProblem lp = LpProblem::with_variables(2);
  lp.cost = {-1.0, 0.0};
  lp.add_row(std::vector<double>{1.0, -1.0}, RowSense::LessEqual, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST(SolveLp, FreeVariablesAndEqualityRows) {
  // min x + y, x − y = 1, x + y >= −4, x, y free → value −4.
  LpProblem lp = LpProblem::with_variables(2);
  lp.cost = {1.0, 1.0};
  lp.lower = {-kInfinity, -kInfinity};
  lp.add_row(std::vector<double>{1.0, -1.0}, RowSense::Equal, 1.0);
  lp.add_row(std::vector<double>{1.0, 1.0}, RowSense::GreaterEqual, -4.0);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, -4.0, 1e-10);
  EXPECT_NEAR(s.primal[0], -1.5, 1e-10);
  EXPECT_NEAR(s.duals[1], 1.0, 1e-10);
}

TEST(SolveLp, RejectsMalformedInput) {
  LpProblem lp = LpProblem::with_variables(2);
  lp.add_row(std::vector<double>{1.0, 1.0}, RowSense::LessEqual, 1.0);
  lp.rhs.push_back(3.0);
  EXPECT_THROW(solve_lp(lp), std::invalid_argument);
  LpProblem crossed = LpProblem::with_variables(1);
  crossed.lower = {2.0};
  crossed.upper = {1.0};
  EXPECT_THROW(solve_lp(crossed), std::invalid_argument);
}

TEST(SolveLp, DegenerateCyclingExample) {
  // Beale's example cycles under the textbook rule without anti-cycling.
  LpProblem lp = LpProblem::with_variables(4);
  lp.cost = {-0.75, 150.0, -0.02, 6.0};
  lp.add_row(std::vector<double>{0.25, -60.0, -0.04, 9.0}, RowSense::LessEqual, 0.0);
  lp.add_row(std::vector<double>{0.5, -90.0, -0.02, 3.0}, RowSense::LessEqual, 0.0);
  lp.add_row(std::vector<double>{0.0, 0.0, 1.0, 0.0}, RowSense::LessEqual, 1.0);
  const LpSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, -0.05, 1e-10);
}

void check_against_vertex_enumeration(bool boxed, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int feasible = 0;
  for (int trial = 0; trial < count; ++trial) {
    const LpProblem lp = random_lp(rng, 8, 8, boxed);
    const auto oracle = minimize_over_vertices(polytope_of(lp), lp.cost);
    const LpSolution s = solve_lp(lp);
    if (!oracle.feasible) {
      EXPECT_EQ(s.status, LpStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(s.status, LpStatus::Optimal) << "trial " << trial;
    EXPECT_NEAR(s.objective, oracle.value, 1e-6 * std::max(1.0, std::abs(oracle.value)))
        << "trial " << trial;
    EXPECT_LE(primal_residual(lp, s.primal), 1e-8);
    EXPECT_NEAR(dual_objective(lp, s), s.objective, 1e-7 * std::max(1.0, std::abs(s.objective)));
  }
  EXPECT_GT(feasible, count / 4);
}

TEST(SolveLp, MatchesVertexEnumerationOnRandomLps) {
  check_against_vertex_enumeration(false, 1000, 20240611);
}

TEST(SolveLp, MatchesVertexEnumerationWithFiniteBounds) {
  check_against_vertex_enumeration(true, 500, 77);
}

TEST(SolveLp, DualSignsFollowRowSense) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const LpProblem lp = random_lp(rng, 6, 6, false);
    const LpSolution s = solve_lp(lp);
    if (!s.optimal()) continue;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
      if (lp.senses[i] == RowSense::LessEqual) {
        EXPECT_LE(s.duals[i], 1e-9);
      } else if (lp.senses[i] == RowSense::GreaterEqual) {
        EXPECT_GE(s.duals[i], -1e-9);
      }
    }
  }
}

TEST(SolveLp, ManyPivotsTriggerRefactorization) {
  // Assignment-like problem with enough rows to pass the refactor interval.
  const std::size_t n = 12;
  LpProblem lp = LpProblem::with_variables(n * n);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> cost(1, 50);
  for (double& c : lp.cost) c = cost(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n * n, 0.0), col(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      row[i * n + j] = 1.0;
      col[j * n + i] = 1.0;
    }
    lp.add_row(row, RowSense::Equal, 1.0);
    lp.add_row(col, RowSense::Equal, 1.0);
  }
  LpTolerances tight;
  tight.refactor_interval = 5;
  const LpSolution a = solve_lp(lp);
  const LpSolution b = solve_lp(lp, tight);
  ASSERT_TRUE(a.optimal());
  ASSERT_TRUE(b.optimal());
  EXPECT_NEAR(a.objective, b.objective, 1e-9);
  EXPECT_NEAR(dual_objective(lp, a), a.objective, 1e-7 * a.objective);
}

}  // namespace
