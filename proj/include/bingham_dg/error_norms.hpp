#pragma once

#include "constitutive.hpp"
#include "field.hpp"
#include "fluxes.hpp"
#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace bdg {

/// Field values at one quadrature point, with its integration weight.
struct Sample {
  double x = 0.0;
  double weight = 0.0;  // physical quadrature weight
  double h = 0.0;
  double u = 0.0;
  double E = 0.0;
  bool active = false;
};

/// L2 entries are the integral of the squared error (no square root).
struct ErrorReport {
  double L2_h = 0.0;
  double L2_u = 0.0;
  double Linf_h = 0.0;
  double Linf_u = 0.0;
  double active_pct = 0.0;
  double nr_per_step = 0.0;
  double cpu_seconds = 0.0;
};

/// Samples ordered by x (elements left to right, nodes ascending).
inline std::vector<Sample> samples_from_state(const SolutionState& state,
                                              const ProblemSetup& setup) {
  std::vector<Sample> out;
  const Mesh1D& m = setup.mesh;
  const std::size_t nq = setup.h_basis.n_quad();
  out.reserve(m.n_el() * nq);
  for (std::size_t e = 0; e < m.n_el(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) {
      Sample s;
      s.x = m.to_physical(e, setup.h_basis.quad_nodes()[q]);
      s.weight = m.jacobian(e) * setup.h_basis.quad_weights()[q];
      s.h = field_at_node(state.h.element(e), setup.h_basis, q);
      s.u = field_at_node(state.u.element(e), setup.u_basis, q);
      s.E = field_at_node(state.E.element(e), setup.E_basis, q);
      s.active = is_active(s.E, setup.params.sigma0, setup.reg.gamma);
      out.push_back(s);
    }
  }
  return out;
}

using ReferenceFn = std::function<PrimitivePair(double)>;
using ExcludeFn = std::function<bool(double)>;

/// Norms over a sample set; the order of samples does not matter.
inline ErrorReport error_norms(const std::vector<Sample>& samples, const ReferenceFn& reference,
                               double domain_length, const ExcludeFn& exclude = {}) {
  ErrorReport r;
  double active = 0.0;
  for (const Sample& s : samples) {
    if (s.active) active += s.weight;
    if (exclude && exclude(s.x)) continue;
    const PrimitivePair ref = reference(s.x);
    const double eh = s.h - ref.h;
    const double eu = s.u - ref.u;
    r.L2_h += s.weight * eh * eh;
    r.L2_u += s.weight * eu * eu;
    r.Linf_h = std::max(r.Linf_h, std::abs(eh));
    r.Linf_u = std::max(r.Linf_u, std::abs(eu));
  }
  r.active_pct = 100.0 * active / domain_length;
  return r;
}

inline ErrorReport error_norms(const SolutionState& state, const ReferenceFn& reference,
                               const ProblemSetup& setup, const ExcludeFn& exclude = {}) {
  return error_norms(samples_from_state(state, setup), reference, setup.mesh.length(), exclude);
}

/// Reference that evaluates another discrete state (e.g. the initial one).
inline ReferenceFn reference_from_state(const SolutionState& ref, const ProblemSetup& setup) {
  return [ref, &setup](double x) {
    const std::size_t e = setup.mesh.locate(std::min(x, setup.mesh.x_right()));
    const double xi = std::clamp((x - setup.mesh.center(e)) / setup.mesh.jacobian(e), -1.0, 1.0);
    return PrimitivePair{evaluate_field(ref.h, setup.h_basis, e, xi),
                         evaluate_field(ref.u, setup.u_basis, e, xi)};
  };
}

/// Number of maximal runs of equal activity along x, and the activity of the first run.
struct ActivityRuns {
  std::size_t count = 0;
  bool first_active = false;
  std::vector<bool> pattern;
};

inline ActivityRuns activity_runs(const std::vector<Sample>& samples) {
  std::vector<Sample> sorted = samples;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Sample& a, const Sample& b) { return a.x < b.x; });
  ActivityRuns r;
  for (const Sample& s : sorted) {
    if (r.pattern.empty() || r.pattern.back() != s.active) r.pattern.push_back(s.active);
  }
  r.count = r.pattern.size();
  r.first_active = !r.pattern.empty() && r.pattern.front();
  return r;
}

}  // namespace bdg
