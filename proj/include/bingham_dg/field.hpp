#pragma once

#include "basis.hpp"
#include "mesh.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bdg {

/// Per-element modal coefficients of a discontinuous polynomial field.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(std::size_t basis_order, std::size_t n_el)
      : order_(basis_order), n_el_(n_el), coeffs_(n_el * (basis_order + 1), 0.0) {}

  std::size_t basis_order() const { return order_; }
  std::size_t block_size() const { return order_ + 1; }
  std::size_t n_el() const { return n_el_; }

  std::span<double> element(std::size_t e) {
    check(e);
    return {coeffs_.data() + e * block_size(), block_size()};
  }
  std::span<const double> element(std::size_t e) const {
    check(e);
    return {coeffs_.data() + e * block_size(), block_size()};
  }

  std::vector<double>& data() { return coeffs_; }
  const std::vector<double>& data() const { return coeffs_; }

  bool operator==(const CoefficientField&) const = default;

 private:
  void check(std::size_t e) const {
    if (e >= n_el_) throw std::out_of_range("CoefficientField: element index out of range");
  }

  std::size_t order_ = 0;
  std::size_t n_el_ = 0;
  std::vector<double> coeffs_;
};

inline double evaluate_field(const CoefficientField& field, const BasisSet& basis,
                             std::size_t element, double xi) {
  if (element >= field.n_el()) throw std::out_of_range("evaluate_field: element index");
  const auto c = field.element(element);
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * basis.value_at(i, xi);
  return v;
}

/// Value at the q-th shared quadrature node; uses the tabulated basis.
inline double field_at_node(std::span<const double> c, const BasisSet& basis, std::size_t q) {
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * basis.value(q, i);
  return v;
}

/// Reference-coordinate slope at the q-th quadrature node.
inline double field_slope_at_node(std::span<const double> c, const BasisSet& basis,
                                  std::size_t q) {
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * basis.deriv(q, i);
  return v;
}

inline double field_trace(std::span<const double> c, const BasisSet& basis, int side) {
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * basis.trace(side, i);
  return v;
}

/// Element-wise L2 projection: c_i = int_{-1}^{1} f(x(xi)) psi_i(xi) dxi,
/// evaluated with the basis quadrature. The basis is orthonormal on the
/// reference element, so the physical mass matrix is (width/2) * I.
template <class F>
CoefficientField project_function(F&& f, const BasisSet& basis, const Mesh1D& mesh) {
  CoefficientField field(basis.order(), mesh.n_el());
  for (std::size_t e = 0; e < mesh.n_el(); ++e) {
    auto c = field.element(e);
    for (std::size_t q = 0; q < basis.n_quad(); ++q) {
      const double fx = f(mesh.to_physical(e, basis.quad_nodes()[q]));
      const double w = basis.quad_weights()[q];
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += w * fx * basis.value(q, i);
    }
  }
  return field;
}

template <class F>
CoefficientField project_function(F&& f, std::size_t order, const Mesh1D& mesh) {
  return project_function(std::forward<F>(f), BasisSet(order, order + 2), mesh);
}

/// Element-wise interpolation at equispaced reference nodes that include both
/// end points (the midpoint for order 0). For order >= 1 the result is
/// continuous across element edges and matches f there exactly.
template <class F>
CoefficientField interpolate_function(F&& f, std::size_t order, const Mesh1D& mesh) {
  const std::size_t nb = order + 1;
  std::vector<double> nodes(nb, 0.0);
  for (std::size_t k = 0; k < nb && order > 0; ++k) {
    nodes[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(order);
  }
  Eigen::MatrixXd vandermonde(nb, nb);
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t i = 0; i < nb; ++i) vandermonde(k, i) = legendre_value(i, nodes[k]);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vandermonde);
  CoefficientField field(order, mesh.n_el());
  Eigen::VectorXd rhs(nb);
  for (std::size_t e = 0; e < mesh.n_el(); ++e) {
    for (std::size_t k = 0; k < nb; ++k) {
      double x = mesh.to_physical(e, nodes[k]);
      if (order > 0 && k == 0) x = mesh.edges()[e];
      if (order > 0 && k == order) x = mesh.edges()[e + 1];
      rhs(k) = f(x);
    }
    const Eigen::VectorXd c = lu.solve(rhs);
    auto out = field.element(e);
    for (std::size_t i = 0; i < nb; ++i) out[i] = c(i);
  }
  return field;
}

}  // namespace bdg
