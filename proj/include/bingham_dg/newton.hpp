#pragma once

#include "assembly.hpp"
#include "block_tridiagonal.hpp"
#include "problem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdg {

struct NewtonConfig {
  std::size_t max_iters = 10;
  double abs_tol = 1e-10;  // on the residual 2-norm
  double rel_tol = 1e-12;  // residual reduction relative to the first residual
  double dt = 1e-2;
  /// Residuals below roundoff_factor * eps * |terms| are treated as converged:
  /// at small dt the 1/dt mass terms put the attainable floor above abs_tol.
  double roundoff_factor = 1.0;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("NewtonConfig: max_iters must be >= 1");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw std::invalid_argument("NewtonConfig: tolerances must be > 0");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("NewtonConfig: dt must be > 0");
  }
};

struct StepStats {
  std::size_t newton_iters = 0;  // linear solves performed
  double final_residual = 0.0;
  bool converged = false;
  bool hit_max_iters = false;
  double wall_time = 0.0;
  std::vector<double> residual_history;  // 2-norm before each update, plus the last one
};

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

/// Plain Newton on the coupled (V, E) system, dt from `config`.
inline std::pair<SolutionState, StepStats> newton_solve(SolutionState guess,
                                                        const SolutionState& old,
                                                        const ProblemSetup& setup,
                                                        const NewtonConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  StepStats stats;
  double r0 = 0.0;
  for (;;) {
    Assembly a = assemble(guess, old, config.dt, setup);
    const double r = norm2(a.residual);
    if (!std::isfinite(r)) throw StateValidityError("newton_solve: non-finite residual");
    stats.residual_history.push_back(r);
    if (stats.newton_iters == 0) r0 = r;
    const double floor =
        config.roundoff_factor * std::numeric_limits<double>::epsilon() * norm2(a.term_magnitude);
    if (r <= config.abs_tol || r <= config.rel_tol * r0 || r <= floor) {
      stats.converged = true;
      break;
    }
    if (stats.newton_iters == config.max_iters) {
      stats.hit_max_iters = true;
      break;
    }
    for (double& v : a.residual) v = -v;
    const std::vector<double> dx = linear_solve(a.jacobian, a.residual);
    guess.add(dx);
    ++stats.newton_iters;
  }
  stats.final_residual = stats.residual_history.back();
  stats.wall_time = detail::seconds_since(t0);
  return {std::move(guess), std::move(stats)};
}

/// gamma_i = gamma0 + (i - 1)(gamma - gamma0)/(n - 1), i = 1..n.
inline std::vector<double> continuation_schedule(double gamma0, double gamma, std::size_t n) {
  if (n < 2) throw std::invalid_argument("continuation_schedule: n_gamma must be >= 2");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = gamma0 + static_cast<double>(i) * (gamma - gamma0) / static_cast<double>(n - 1);
  }
  out.back() = gamma;
  return out;
}

inline void merge_stats(StepStats& into, const StepStats& s) {
  into.newton_iters += s.newton_iters;
  into.final_residual = s.final_residual;
  into.converged = into.converged && s.converged;
  into.hit_max_iters = into.hit_max_iters || s.hit_max_iters;
  into.wall_time += s.wall_time;
  into.residual_history.insert(into.residual_history.end(), s.residual_history.begin(),
                               s.residual_history.end());
}

/// One backward-Euler step solved for gamma_1 .. gamma_n in turn, each stage
/// warm-started from the previous one.
inline std::pair<SolutionState, StepStats> continuation_step(const SolutionState& old,
                                                             double dt,
                                                             const ProblemSetup& setup,
                                                             const NewtonConfig& config,
                                                             const ContinuationSchedule& schedule) {
  NewtonConfig cfg = config;
  cfg.dt = dt;
  ProblemSetup stage = setup;
  stage.reg.continuation.reset();
  StepStats total;
  total.converged = true;
  SolutionState cur = old;
  for (double g : continuation_schedule(schedule.gamma0, setup.reg.gamma, schedule.n_gamma)) {
    stage.reg.gamma = g;
    auto [next, s] = newton_solve(std::move(cur), old, stage, cfg);
    cur = std::move(next);
    merge_stats(total, s);
  }
  cur.time = old.time + dt;
  return {std::move(cur), std::move(total)};
}

inline std::pair<SolutionState, StepStats> step(const SolutionState& old, double dt,
                                                const ProblemSetup& setup,
                                                const NewtonConfig& config) {
  if (setup.reg.continuation) {
    return continuation_step(old, dt, setup, config, *setup.reg.continuation);
  }
  NewtonConfig cfg = config;
  cfg.dt = dt;
  auto out = newton_solve(old, old, setup, cfg);
  out.first.time = old.time + dt;
  return out;
}

struct RunStats {
  std::size_t steps = 0;
  std::size_t newton_iters = 0;
  std::size_t max_iter_steps = 0;  // steps that ended on max_iters
  bool all_converged = true;
  double wall_time = 0.0;

  double iters_per_step() const {
    return steps == 0 ? 0.0 : static_cast<double>(newton_iters) / static_cast<double>(steps);
  }
};

struct RunFailure {
  enum class Kind { StateValidity, Solver, Other };
  Kind kind = Kind::Other;
  std::string message;
  double time = 0.0;  // start of the failed step
};

struct RunResult {
  SolutionState state;  // last accepted state
  RunStats stats;
  std::optional<RunFailure> failure;
};

/// (time, snapshot, stats of the step that produced it)
using Observer = std::function<void(double, const SolutionState&, const StepStats&)>;

/// Advances to t_final with step config.dt (the last step may be shorter).
/// The observer sees the initial state, every `stride`-th step and the final one.
inline RunResult run_simulation(const SolutionState& initial, double t_final,
                                const ProblemSetup& setup, const NewtonConfig& config,
                                const Observer& observer = {}, std::size_t stride = 0) {
  config.validate();
  if (t_final < initial.time) throw std::invalid_argument("run_simulation: t_final < start");
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out{initial, {}, std::nullopt};
  if (observer) observer(initial.time, initial, StepStats{});
  const double span = t_final - initial.time;
  const auto n_steps =
      static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9 * std::max(1.0, span / config.dt)));
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_next = k + 1 == n_steps
                              ? t_final
                              : initial.time + static_cast<double>(k + 1) * config.dt;
    const double dt = k + 1 == n_steps ? t_final - out.state.time : config.dt;
    try {
      auto [next, s] = step(out.state, dt, setup, config);
      next.time = t_next;
      out.state = std::move(next);
      ++out.stats.steps;
      out.stats.newton_iters += s.newton_iters;
      if (s.hit_max_iters) ++out.stats.max_iter_steps;
      out.stats.all_converged = out.stats.all_converged && s.converged;
      const bool last = k + 1 == n_steps;
      if (observer && (last || (stride > 0 && (k + 1) % stride == 0))) {
        observer(out.state.time, out.state, s);
      }
    } catch (const StateValidityError& e) {
      out.failure = RunFailure{RunFailure::Kind::StateValidity, e.what(), out.state.time};
      break;
    } catch (const SolverError& e) {
      out.failure = RunFailure{RunFailure::Kind::Solver, e.what(), out.state.time};
      break;
    } catch (const std::domain_error& e) {
      out.failure = RunFailure{RunFailure::Kind::StateValidity, e.what(), out.state.time};
      break;
    }
  }
  out.stats.wall_time = detail::seconds_since(t0);
  return out;
}

}  // namespace bdg
