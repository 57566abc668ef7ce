#pragma once

#include "basis.hpp"
#include "constitutive.hpp"
#include "field.hpp"
#include "fluxes.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdg {

/// Depth became non-positive (or non-finite) at an evaluation point.
class StateValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial orders of the bottom (m0), depth (m1), velocity (m2) and strain rate (m3).
struct FieldOrders {
  std::size_t bottom = 1;
  std::size_t h = 1;
  std::size_t u = 1;
  std::size_t E = 1;

  std::size_t max() const { return std::max({bottom, h, u, E}); }
  bool operator==(const FieldOrders&) const = default;
};

struct SolutionState {
  CoefficientField h;
  CoefficientField u;
  CoefficientField E;
  double time = 0.0;

  std::size_t n_el() const { return h.n_el(); }
  std::size_t block_size() const { return h.block_size() + u.block_size() + E.block_size(); }
  std::size_t n_unknowns() const { return n_el() * block_size(); }

  /// Element-major packing: per element [h coeffs | u coeffs | E coeffs].
  std::vector<double> pack() const {
    std::vector<double> out;
    out.reserve(n_unknowns());
    for (std::size_t e = 0; e < n_el(); ++e) {
      for (double c : h.element(e)) out.push_back(c);
      for (double c : u.element(e)) out.push_back(c);
      for (double c : E.element(e)) out.push_back(c);
    }
    return out;
  }

  void unpack(std::span<const double> x) {
    if (x.size() != n_unknowns()) throw std::invalid_argument("SolutionState::unpack: size");
    std::size_t k = 0;
    for (std::size_t e = 0; e < n_el(); ++e) {
      for (double& c : h.element(e)) c = x[k++];
      for (double& c : u.element(e)) c = x[k++];
      for (double& c : E.element(e)) c = x[k++];
    }
  }

  /// x += delta in packed layout.
  void add(std::span<const double> delta) {
    if (delta.size() != n_unknowns()) throw std::invalid_argument("SolutionState::add: size");
    std::size_t k = 0;
    for (std::size_t e = 0; e < n_el(); ++e) {
      for (double& c : h.element(e)) c += delta[k++];
      for (double& c : u.element(e)) c += delta[k++];
      for (double& c : E.element(e)) c += delta[k++];
    }
  }
};

struct BoundaryCondition {
  enum class Kind { Dirichlet, HomogeneousNeumann };
  Kind kind = Kind::HomogeneousNeumann;
  double value = 0.0;

  static BoundaryCondition dirichlet(double v) { return {Kind::Dirichlet, v}; }
  static BoundaryCondition neumann() { return {Kind::HomogeneousNeumann, 0.0}; }
  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
};

struct SideConditions {
  BoundaryCondition h;
  BoundaryCondition u;
  BoundaryCondition E;
};

struct BoundarySpec {
  SideConditions left;
  SideConditions right;
};

/// How the bottom profile is brought into the order-m0 space.
enum class BottomRepresentation {
  Interpolation,  // continuous, exact at element edges
  L2Projection,
};

/// Everything the residual needs besides the two time levels.
struct ProblemSetup {
  Mesh1D mesh;
  FieldOrders orders;
  BasisSet bottom_basis;
  BasisSet h_basis;
  BasisSet u_basis;
  BasisSet E_basis;
  CoefficientField bottom;
  PhysicalParams params;
  RegularizationConfig reg;
  BoundarySpec bc;
  /// Wave speeds use sqrt(g h) by default; set to use sqrt(g_c h) instead.
  bool wave_speeds_use_gc = false;
  /// Newton tangent of the HLL flux. Frozen speeds leave out dS/dV, which
  /// is not zero inside a branch, and Newton then only converges linearly.
  WaveSpeedMode tangent_mode = WaveSpeedMode::Exact;

  double wave_gravity() const { return wave_speeds_use_gc ? params.g_c() : params.g; }

  SolutionState zero_state() const {
    return {CoefficientField(orders.h, mesh.n_el()), CoefficientField(orders.u, mesh.n_el()),
            CoefficientField(orders.E, mesh.n_el()), 0.0};
  }
};

/// Shared quadrature: Gauss-Legendre with max(m0..m3) + 2 points.
inline std::size_t shared_quadrature_points(const FieldOrders& orders) {
  return orders.max() + 2;
}

template <class BottomFn>
ProblemSetup make_setup(Mesh1D mesh, const FieldOrders& orders, BottomFn&& bottom_profile,
                        const PhysicalParams& params, const RegularizationConfig& reg,
                        const BoundarySpec& bc,
                        BottomRepresentation bottom_rep = BottomRepresentation::Interpolation) {
  params.validate();
  reg.validate();
  const std::size_t nq = shared_quadrature_points(orders);
  BasisSet bb(orders.bottom, nq);
  CoefficientField bottom =
      bottom_rep == BottomRepresentation::Interpolation
          ? interpolate_function(bottom_profile, orders.bottom, mesh)
          : project_function(bottom_profile, bb, mesh);
  return ProblemSetup{std::move(mesh),
                      orders,
                      std::move(bb),
                      BasisSet(orders.h, nq),
                      BasisSet(orders.u, nq),
                      BasisSet(orders.E, nq),
                      std::move(bottom),
                      params,
                      reg,
                      bc};
}

/// Value of the discrete bottom at physical x.
inline double bottom_at(const ProblemSetup& setup, double x) {
  const std::size_t e = setup.mesh.locate(x);
  const double xi = (x - setup.mesh.center(e)) / setup.mesh.jacobian(e);
  return evaluate_field(setup.bottom, setup.bottom_basis, e, std::clamp(xi, -1.0, 1.0));
}

}  // namespace bdg
