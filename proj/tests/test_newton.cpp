#include "test_support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bdg;

TEST(LinearSolve, Identity) {
  BlockTridiagonal a(3, 2);
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t i = 0; i < 2; ++i) a.at(b, b, i, i) = 1.0;
  }
  const std::vector<double> rhs{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(linear_solve(a, rhs), rhs);
}

TEST(LinearSolve, Diagonal) {
  BlockTridiagonal a(2, 1);
  a.at(0, 0, 0, 0) = 4.0;
  a.at(1, 1, 0, 0) = -0.5;
  const auto x = linear_solve(a, std::vector<double>{2.0, 3.0});
  EXPECT_DOUBLE_EQ(x[0], 0.5);
  EXPECT_DOUBLE_EQ(x[1], -6.0);
}

TEST(LinearSolve, RandomAgainstDense) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (std::size_t b : {1u, 3u, 6u}) {
    const std::size_t n = 9;
    BlockTridiagonal a(n, b);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n * b, n * b);
    for (std::size_t rb = 0; rb < n; ++rb) {
      for (std::size_t cb = rb == 0 ? 0 : rb - 1; cb <= std::min(n - 1, rb + 1); ++cb) {
        for (std::size_t i = 0; i < b; ++i) {
          for (std::size_t j = 0; j < b; ++j) {
            double v = d(rng);
            if (rb == cb && i == j) v += 4.0 * b;
            a.at(rb, cb, i, j) = v;
            dense(rb * b + i, cb * b + j) = v;
          }
        }
      }
    }
    Eigen::VectorXd rhs(n * b);
    for (auto& v : rhs) v = d(rng);
    const auto x = linear_solve(a, std::vector<double>(rhs.data(), rhs.data() + rhs.size()));
    const Eigen::VectorXd ref = dense.partialPivLu().solve(rhs);
    for (std::size_t i = 0; i < n * b; ++i) EXPECT_NEAR(x[i], ref(i), 1e-10);
    const auto ax = a.multiply(x);
    for (std::size_t i = 0; i < n * b; ++i) EXPECT_NEAR(ax[i], rhs(i), 1e-10);
  }
}

TEST(LinearSolve, SingularThrows) {
  BlockTridiagonal a(2, 2);
  a.at(0, 0, 0, 0) = 1.0;
  a.at(1, 1, 0, 0) = 1.0;
  EXPECT_THROW(linear_solve(a, std::vector<double>(4, 1.0)), SolverError);
  EXPECT_THROW(linear_solve(a, std::vector<double>(3, 1.0)), std::invalid_argument);
}

TEST(NewtonConfigTest, Validation) {
  NewtonConfig c;
  EXPECT_EQ(c.max_iters, 10u);
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = NewtonConfig{};
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Newton, EquilibriumGuessIsRoot) {
  RegularizationConfig reg;
  PhysicalParams p;
  p.eta = 1.0;
  p.sigma0 = 1.0;
  const Benchmark b = setup_constant_free_surface(100, {1, 1, 1, 1}, p, reg);
  NewtonConfig c;
  const auto [s, st] = newton_solve(b.initial, b.initial, b.setup, c);
  EXPECT_TRUE(st.converged);
  EXPECT_LE(st.newton_iters, 1u);
  const auto a = s.pack(), z = b.initial.pack();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], z[i], 1e-12);
}

TEST(Newton, PerturbedEquilibriumConvergesFast) {
  RegularizationConfig reg;
  PhysicalParams p;
  const Benchmark b = setup_constant_free_surface(50, {1, 1, 1, 1}, p, reg);
  SolutionState guess = b.initial;
  bdg::testing::jiggle(guess, 1e-7, 9);
  NewtonConfig c;
  const auto [s, st] = newton_solve(guess, b.initial, b.setup, c);
  EXPECT_TRUE(st.converged);
  EXPECT_LE(st.newton_iters, 2u);
}

TEST(Step, ZeroPhysicsStillWaterPreserved) {
  PhysicalParams p;
  RegularizationConfig reg;
  BoundarySpec bc;
  bc.left = {BoundaryCondition::dirichlet(2.0), BoundaryCondition::dirichlet(0.0),
             BoundaryCondition::dirichlet(0.0)};
  bc.right = bc.left;
  ProblemSetup s = make_setup(build_uniform_mesh(0.0, 1.0, 8), {1, 1, 1, 1},
                              [](double) { return 0.0; }, p, reg, bc);
  SolutionState st = s.zero_state();
  st.h = project_function([](double) { return 2.0; }, s.h_basis, s.mesh);
  const auto [next, stats] = step(st, 0.01, s, NewtonConfig{});
  EXPECT_EQ(next.pack(), st.pack());
  EXPECT_EQ(stats.newton_iters, 0u);
  EXPECT_DOUBLE_EQ(next.time, 0.01);
}

TEST(Step, FixedPointPreservation) {
  for (Regularization v : {Regularization::Reg1, Regularization::Reg2, Regularization::Reg3}) {
    PhysicalParams p;
    p.eta = 1.0;
    p.sigma0 = 1.0;
    RegularizationConfig reg;
    reg.variant = v;
    const Benchmark b = setup_constant_free_surface(40, {2, 2, 1, 1}, p, reg);
    const auto [next, st] = step(b.initial, 1e-2, b.setup, NewtonConfig{});
    const auto a = next.pack(), z = b.initial.pack();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], z[i], 1e-12);
  }
}

TEST(Step, DamBreakSingleStepStaysWet) {
  PhysicalParams p;
  p.eta = 0.02;
  p.sigma0 = 0.2;
  RegularizationConfig reg;
  reg.gamma = reg.beta = 1e2;
  const Benchmark b = setup_dam_break(100, {1, 1, 1, 0}, p, reg);
  NewtonConfig c;
  c.dt = 1e-5;
  const auto [next, st] = step(b.initial, 1e-5, b.setup, c);
  EXPECT_TRUE(st.converged);
  for (const Sample& s : samples_from_state(next, b.setup)) {
    EXPECT_TRUE(std::isfinite(s.h) && std::isfinite(s.u) && std::isfinite(s.E));
    EXPECT_GT(s.h, 0.0);
  }
}

TEST(Newton, QuadraticResidualRatio) {
  PhysicalParams p;
  p.eta = 0.02;
  p.sigma0 = 0.2;
  RegularizationConfig reg;
  reg.gamma = reg.beta = 1e2;
  const Benchmark b = setup_dam_break(100, {1, 1, 1, 0}, p, reg);
  NewtonConfig c;
  c.dt = 1e-5;
  // leave E = 0 first; then take a 10x larger step so several iterations are needed
  const RunResult warm = run_simulation(b.initial, 1e-4, b.setup, c, {}, 0);
  ASSERT_FALSE(warm.failure);
  c.dt = 1e-4;
  c.abs_tol = 1e-14;
  c.rel_tol = 1e-16;
  c.max_iters = 20;
  const auto [next, st] = newton_solve(warm.state, warm.state, b.setup, c);
  ASSERT_TRUE(st.converged);
  const auto& r = st.residual_history;
  ASSERT_GE(r.size(), 4u);
  std::size_t checked = 0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    if (r[k] > 1e-1 * r[0]) continue;  // not yet in the basin
    if (r[k + 1] < 1e-14 * r[0]) continue;  // roundoff floor
    EXPECT_LE(r[k + 1] / r[0], 1e3 * (r[k] / r[0]) * (r[k] / r[0])) << "k=" << k;
    ++checked;
  }
  EXPECT_GE(checked, 2u);
}

TEST(Continuation, Schedule) {
  EXPECT_EQ(continuation_schedule(100, 1000, 3), (std::vector<double>{100, 550, 1000}));
  EXPECT_EQ(continuation_schedule(100, 1000, 2), (std::vector<double>{100, 1000}));
  EXPECT_THROW(continuation_schedule(100, 1000, 1), std::invalid_argument);
}

TEST(Continuation, StepAggregatesStages) {
  PhysicalParams p;
  p.eta = 0.02;
  p.sigma0 = 0.2;
  RegularizationConfig reg;
  reg.gamma = 300.0;
  reg.beta = 1e2;
  reg.continuation = ContinuationSchedule{100.0, 3};
  const Benchmark b = setup_dam_break(40, {1, 1, 1, 0}, p, reg);
  NewtonConfig c;
  c.dt = 1e-5;
  const auto [next, st] = step(b.initial, 1e-5, b.setup, c);
  EXPECT_TRUE(st.converged);
  // each of the three stages assembles at least once
  EXPECT_GE(st.residual_history.size(), 3u);
  // the final stage solves the target problem
  RegularizationConfig target = reg;
  target.continuation.reset();
  ProblemSetup s = b.setup;
  s.reg = target;
  EXPECT_LE(norm2(residual(next, b.initial, 1e-5, s)), 1e-8);
}

TEST(Run, ZeroHorizon) {
  const Benchmark b = bdg::testing::smooth_channel(4, {1, 1, 1, 1}, Regularization::Reg1);
  std::size_t calls = 0;
  const RunResult r = run_simulation(b.initial, b.initial.time, b.setup, NewtonConfig{},
                                     [&](double, const SolutionState&, const StepStats&) { ++calls; });
  EXPECT_EQ(r.stats.steps, 0u);
  EXPECT_EQ(r.state.pack(), b.initial.pack());
  EXPECT_EQ(calls, 1u);
}

TEST(Run, TestOneHundredStepsPreserved) {
  PhysicalParams p;
  RegularizationConfig reg;
  const Benchmark b = setup_constant_free_surface(100, {1, 1, 1, 1}, p, reg);
  std::vector<double> times;
  const RunResult r = run_simulation(
      b.initial, 1.0, b.setup, NewtonConfig{},
      [&](double t, const SolutionState&, const StepStats&) { times.push_back(t); }, 25);
  EXPECT_EQ(r.stats.steps, 100u);
  EXPECT_FALSE(r.failure);
  EXPECT_EQ(times.size(), 5u);
  EXPECT_DOUBLE_EQ(r.state.time, 1.0);
  const auto a = r.state.pack(), z = b.initial.pack();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], z[i], 1e-12);
}

TEST(Run, ShortLastStep) {
  PhysicalParams p;
  RegularizationConfig reg;
  const Benchmark b = setup_constant_free_surface(10, {1, 1, 1, 1}, p, reg);
  NewtonConfig c;
  c.dt = 0.3;
  const RunResult r = run_simulation(b.initial, 1.0, b.setup, c);
  EXPECT_EQ(r.stats.steps, 4u);
  EXPECT_DOUBLE_EQ(r.state.time, 1.0);
}

TEST(Run, FailureIsReportedWithStats) {
  Benchmark b = bdg::testing::smooth_channel(4, {1, 1, 1, 1}, Regularization::Reg1);
  b.initial.h.element(1)[0] = -3.0;
  const RunResult r = run_simulation(b.initial, 0.1, b.setup, NewtonConfig{});
  ASSERT_TRUE(r.failure);
  EXPECT_EQ(r.failure->kind, RunFailure::Kind::StateValidity);
  EXPECT_EQ(r.stats.steps, 0u);
}

TEST(Run, Deterministic) {
  PhysicalParams p;
  p.eta = 0.02;
  p.sigma0 = 0.2;
  RegularizationConfig reg;
  reg.gamma = reg.beta = 1e2;
  const Benchmark b = setup_dam_break(30, {1, 1, 1, 0}, p, reg);
  NewtonConfig c;
  c.dt = 1e-4;
  const RunResult r1 = run_simulation(b.initial, 5e-3, b.setup, c);
  const RunResult r2 = run_simulation(b.initial, 5e-3, b.setup, c);
  EXPECT_EQ(r1.state.pack(), r2.state.pack());
}
