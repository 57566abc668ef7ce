#pragma once

#include "constitutive.hpp"
#include "field.hpp"
#include "mesh.hpp"
#include "problem.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bdg {

enum class BenchmarkName { ConstantFreeSurface, ParallelFreeSurface, DamBreak };

inline std::string to_string(BenchmarkName b) {
  switch (b) {
    case BenchmarkName::ConstantFreeSurface: return "constant-free-surface";
    case BenchmarkName::ParallelFreeSurface: return "parallel-free-surface";
    case BenchmarkName::DamBreak: return "dam-break";
  }
  return "unknown";
}

inline std::optional<BenchmarkName> parse_benchmark(const std::string& s) {
  if (s == "constant-free-surface") return BenchmarkName::ConstantFreeSurface;
  if (s == "parallel-free-surface") return BenchmarkName::ParallelFreeSurface;
  if (s == "dam-break") return BenchmarkName::DamBreak;
  return std::nullopt;
}

/// Inclined-channel geometry shared by the two lake-at-rest tests.
struct InclineGeometry {
  double length = 10.0;
  double alpha = std::numbers::pi / 18.0;
  double h0 = 3.0;
};

struct DamBreakGeometry {
  double length = 3.0;
  double wall = 1.5;
  double h1 = 1.5;
  double h2 = 0.5;
};

inline double cosine_bottom(double x) { return std::cos(std::numbers::pi * x); }

struct Benchmark {
  ProblemSetup setup;
  SolutionState initial;
};

/// Fluid at rest with a horizontal free surface over a cosine bottom on an
/// incline; Dirichlet data on every variable at both ends. The initial depth
/// is the projection of the free surface minus the discrete bottom, so it is
/// an exact discrete equilibrium whenever m0 <= m1.
inline Benchmark setup_constant_free_surface(std::size_t n_el, const FieldOrders& orders,
                                             PhysicalParams params,
                                             const RegularizationConfig& reg,
                                             const InclineGeometry& geo = {}) {
  params.alpha = geo.alpha;
  const double level = geo.h0 / std::cos(geo.alpha);
  const double slope = std::tan(geo.alpha);
  BoundarySpec bc;
  bc.left = {BoundaryCondition::dirichlet(level - cosine_bottom(0.0)),
             BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0)};
  bc.right = {BoundaryCondition::dirichlet(level - geo.length * slope - cosine_bottom(geo.length)),
              BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0)};
  ProblemSetup setup = make_setup(build_uniform_mesh(0.0, geo.length, n_el), orders,
                                  cosine_bottom, params, reg, bc);
  SolutionState init = setup.zero_state();
  const ProblemSetup& s = setup;
  init.h = project_function(
      [&](double x) { return level - x * slope - bottom_at(s, x); }, s.h_basis, s.mesh);
  return {std::move(setup), std::move(init)};
}

/// Free surface parallel to the incline: h = h0 - H. At rest only if the
/// yield stress exceeds yield_threshold().
inline Benchmark setup_parallel_free_surface(std::size_t n_el, const FieldOrders& orders,
                                             PhysicalParams params,
                                             const RegularizationConfig& reg,
                                             const InclineGeometry& geo = {}) {
  params.alpha = geo.alpha;
  BoundarySpec bc;
  bc.left = {BoundaryCondition::neumann(), BoundaryCondition::neumann(),
             BoundaryCondition::neumann()};
  bc.right = {BoundaryCondition::neumann(), BoundaryCondition::dirichlet(0.0),
              BoundaryCondition::neumann()};
  ProblemSetup setup = make_setup(build_uniform_mesh(0.0, geo.length, n_el), orders,
                                  cosine_bottom, params, reg, bc);
  SolutionState init = setup.zero_state();
  const ProblemSetup& s = setup;
  init.h = project_function([&](double x) { return geo.h0 - bottom_at(s, x); }, s.h_basis,
                            s.mesh);
  return {std::move(setup), std::move(init)};
}

/// Smallest yield stress that keeps the parallel-free-surface column rigid.
inline double yield_threshold(const PhysicalParams& params, const InclineGeometry& geo) {
  return params.rho * params.g * std::sin(geo.alpha) * geo.h0 * geo.length /
         (2.0 * std::numbers::sqrt2 * (geo.h0 - 1.0));
}

/// Reservoir released onto a wet bed over flat ground.
inline Benchmark setup_dam_break(std::size_t n_el, const FieldOrders& orders,
                                 PhysicalParams params, const RegularizationConfig& reg,
                                 const DamBreakGeometry& geo = {}) {
  params.alpha = 0.0;
  BoundarySpec bc;
  bc.left = {BoundaryCondition::dirichlet(geo.h1), BoundaryCondition::neumann(),
             BoundaryCondition::dirichlet(0.0)};
  bc.right = {BoundaryCondition::dirichlet(geo.h2), BoundaryCondition::neumann(),
              BoundaryCondition::dirichlet(0.0)};
  ProblemSetup setup = make_setup(build_uniform_mesh(0.0, geo.length, n_el), orders,
                                  [](double) { return 0.0; }, params, reg, bc);
  SolutionState init = setup.zero_state();
  // per element, integrate each side of the wall separately so a wall inside
  // an element still gives the exact L2 projection of the step
  const BasisSet& bh = setup.h_basis;
  const Mesh1D& m = setup.mesh;
  for (std::size_t e = 0; e < m.n_el(); ++e) {
    auto c = init.h.element(e);
    const double a = m.edges()[e], b = m.edges()[e + 1];
    const auto add_piece = [&](double lo, double hi, double value) {
      if (!(hi > lo)) return;
      const double xl = (lo - m.center(e)) / m.jacobian(e);
      const double xr = (hi - m.center(e)) / m.jacobian(e);
      const double half = 0.5 * (xr - xl);
      const double mid = 0.5 * (xr + xl);
      for (std::size_t q = 0; q < bh.n_quad(); ++q) {
        const double xi = mid + half * bh.quad_nodes()[q];
        for (std::size_t i = 0; i < c.size(); ++i) {
          c[i] += half * bh.quad_weights()[q] * value * bh.value_at(i, xi);
        }
      }
    };
    add_piece(a, std::min(b, geo.wall), geo.h1);
    add_piece(std::max(a, geo.wall), b, geo.h2);
  }
  return {std::move(setup), std::move(init)};
}

/// Middle state and shock speed of the wet-bed dam break.
struct StokerState {
  double h_m = 0.0;
  double u_m = 0.0;
  double shock_speed = 0.0;
};

inline StokerState stoker_middle_state(double h1, double h2, double g) {
  if (!(h1 > h2) || !(h2 > 0.0) || !(g > 0.0)) {
    throw std::invalid_argument("stoker_middle_state: need h1 > h2 > 0, g > 0");
  }
  // rarefaction velocity minus shock velocity as a function of the middle depth
  const auto f = [&](double hm) {
    return 2.0 * (std::sqrt(g * h1) - std::sqrt(g * hm)) -
           (hm - h2) * std::sqrt(0.5 * g * (hm + h2) / (hm * h2));
  };
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      f, h2, h1, f(h2), f(h1), boost::math::tools::eps_tolerance<double>(52), iters);
  if (iters >= 200) throw std::runtime_error("stoker_middle_state: root finder did not converge");
  StokerState s;
  s.h_m = 0.5 * (lo + hi);
  s.u_m = 2.0 * (std::sqrt(g * h1) - std::sqrt(g * s.h_m));
  s.shock_speed = s.h_m * s.u_m / (s.h_m - h2);
  return s;
}

/// Inviscid dam-break solution at (x, t) with the wall at x0.
inline PrimitivePair stoker_solution(double x, double t, double h1, double h2, double g,
                                     double x0 = 1.5) {
  if (!(t > 0.0)) throw std::invalid_argument("stoker_solution: t must be > 0");
  const StokerState s = stoker_middle_state(h1, h2, g);
  const double c1 = std::sqrt(g * h1);
  const double xi = (x - x0) / t;
  if (xi <= -c1) return {h1, 0.0};
  if (xi <= s.u_m - std::sqrt(g * s.h_m)) {
    const double r = 2.0 * c1 - xi;
    return {r * r / (9.0 * g), 2.0 / 3.0 * (xi + c1)};
  }
  if (xi < s.shock_speed) return {s.h_m, s.u_m};
  return {h2, 0.0};
}

}  // namespace bdg
