#include <gtest/gtest.h>

#include <cmath>

#include "moment_support/clarabel_adapter.hpp"
#include "moment_support/program.hpp"
#include "moment_support/solver_registry.hpp"

using namespace moment_support;

TEST(ClarabelAdapter, SolvesBoxedLinearProgram) {
  ConicProgram prog;
  const auto p = prog.add_variable("p0");
  prog.set_cost(p, 2.0);
  prog.add_box({p, 1.0, 5.0});
  const RawSolution sol = ClarabelAdapter{}.submit(prog, {});
  ASSERT_EQ(sol.status, SolverStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.values[p], 1.0, 1e-7);
  EXPECT_NEAR(sol.objective, 2.0, 1e-7);
}

TEST(ClarabelAdapter, ReportsInfeasibleEqualities) {
  ConicProgram prog;
  const auto x = prog.add_variable("x");
  prog.add_equality({{{x, 1.0}}, 1.0, "x=1"});
  prog.add_equality({{{x, 1.0}}, 2.0, "x=2"});
  const RawSolution sol = ClarabelAdapter{}.submit(prog, {});
  EXPECT_EQ(sol.status, SolverStatus::infeasible);
  EXPECT_FALSE(is_success(sol.status));
}

TEST(ClarabelAdapter, ReportsUnboundedObjective) {
  ConicProgram prog;
  const auto x = prog.add_variable("x");
  prog.set_cost(x, 1.0);
  prog.add_box({x, -std::numeric_limits<double>::infinity(), 0.0});
  EXPECT_EQ(ClarabelAdapter{}.submit(prog, {}).status, SolverStatus::unbounded);
}

// min trace(C X) over X psd with X_00 + X_11 = 1: the smallest eigenvalue of C.
TEST(ClarabelAdapter, PsdBlockMatchesEigenvalue) {
  ConicProgram prog;
  const auto a = prog.add_variable("X00");
  const auto b = prog.add_variable("X01");
  const auto c = prog.add_variable("X11");
  // C = [[2, 1], [1, 3]]
  prog.set_cost(a, 2.0);
  prog.set_cost(b, 2.0);
  prog.set_cost(c, 3.0);
  prog.add_equality({{{a, 1.0}, {c, 1.0}}, 1.0, "trace"});
  AffineMatrix m(2, 2);
  m.coefficient(m.add_variable("X00"))(0, 0) = 1.0;
  const auto off = m.add_variable("X01");
  m.coefficient(off)(0, 1) = m.coefficient(off)(1, 0) = 1.0;
  m.coefficient(m.add_variable("X11"))(1, 1) = 1.0;
  prog.add_psd({m, {a, b, c}, "X"});
  const RawSolution sol = ClarabelAdapter{}.submit(prog, {});
  ASSERT_TRUE(is_success(sol.status)) << sol.message;
  EXPECT_NEAR(sol.objective, 2.5 - std::sqrt(1.25), 1e-7);
}

// min t s.t. ||(x - 3, x + 1)|| <= t: optimum at x = 1, t = 2 sqrt 2.
TEST(ClarabelAdapter, SecondOrderCone) {
  ConicProgram prog;
  const auto x = prog.add_variable("x");
  const auto t = prog.add_variable("t");
  prog.set_cost(t, 1.0);
  Eigen::MatrixXd A(2, 1);
  A << 1.0, 1.0;
  Eigen::VectorXd off(2);
  off << -3.0, 1.0;
  prog.add_second_order_cone({t, A, {x}, off, "norm"});
  const RawSolution sol = ClarabelAdapter{}.submit(prog, {});
  ASSERT_TRUE(is_success(sol.status)) << sol.message;
  EXPECT_NEAR(sol.values[x], 1.0, 1e-6);
  EXPECT_NEAR(sol.values[t], 2.0 * std::sqrt(2.0), 1e-7);
}

TEST(SolverRegistry, UnknownNameIsRejected) {
  EXPECT_THROW(make_solver("nope"), ParameterError);
  EXPECT_EQ(make_solver("clarabel")->name(), "clarabel");
}
