#pragma once

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bdg {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  const int order = static_cast<int>(n);
  // boost returns the non-negative roots in ascending order
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(order);
  QuadratureRule rule;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it != 0.0) rule.nodes.push_back(-*it);
  }
  for (double x : pos) rule.nodes.push_back(x);
  rule.weights.reserve(n);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime<double>(order, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

/// Orthonormal Legendre polynomial sqrt((2i+1)/2) P_i(xi) on [-1, 1].
inline double legendre_value(std::size_t i, double xi) {
  const double scale = std::sqrt((2.0 * static_cast<double>(i) + 1.0) / 2.0);
  return scale * boost::math::legendre_p(static_cast<int>(i), xi);
}

inline double legendre_derivative(std::size_t i, double xi) {
  if (i == 0) return 0.0;
  const double scale = std::sqrt((2.0 * static_cast<double>(i) + 1.0) / 2.0);
  const int n = static_cast<int>(i);
  // boost's P' formula divides by (1 - x^2); use P'_n(+-1) = (+-1)^(n+1) n(n+1)/2 there
  if (xi == 1.0 || xi == -1.0) {
    const double end = 0.5 * n * (n + 1);
    return scale * ((xi > 0.0 || n % 2 == 1) ? end : -end);
  }
  return scale * boost::math::legendre_p_prime<double>(n, xi);
}

/// Normalized Legendre basis of one polynomial order, tabulated on a shared
/// Gauss-Legendre rule and at both reference end points.
class BasisSet {
 public:
  BasisSet(std::size_t order, std::size_t n_quad) : order_(order) {
    if (n_quad < order + 1) {
      throw std::invalid_argument(
          "legendre_basis: quadrature cannot integrate degree-2*order products");
    }
    rule_ = gauss_legendre(n_quad);
    const std::size_t nb = size();
    values_.assign(n_quad * nb, 0.0);
    derivs_.assign(n_quad * nb, 0.0);
    for (std::size_t q = 0; q < n_quad; ++q) {
      for (std::size_t i = 0; i < nb; ++i) {
        values_[q * nb + i] = legendre_value(i, rule_.nodes[q]);
        derivs_[q * nb + i] = legendre_derivative(i, rule_.nodes[q]);
      }
    }
    left_.resize(nb);
    right_.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
      left_[i] = legendre_value(i, -1.0);
      right_[i] = legendre_value(i, 1.0);
    }
  }

  std::size_t order() const { return order_; }
  std::size_t size() const { return order_ + 1; }
  std::size_t n_quad() const { return rule_.nodes.size(); }
  const std::vector<double>& quad_nodes() const { return rule_.nodes; }
  const std::vector<double>& quad_weights() const { return rule_.weights; }

  double value(std::size_t q, std::size_t i) const { return values_[q * size() + i]; }
  /// Reference-coordinate derivative; multiply by 2/width for d/dx.
  double deriv(std::size_t q, std::size_t i) const { return derivs_[q * size() + i]; }
  double left_trace(std::size_t i) const { return left_[i]; }
  double right_trace(std::size_t i) const { return right_[i]; }
  /// Trace at xi = -1 (side < 0) or xi = +1 (side > 0).
  double trace(int side, std::size_t i) const { return side < 0 ? left_[i] : right_[i]; }

  double value_at(std::size_t i, double xi) const { return legendre_value(i, xi); }
  double deriv_at(std::size_t i, double xi) const { return legendre_derivative(i, xi); }

 private:
  std::size_t order_;
  QuadratureRule rule_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  std::vector<double> left_;
  std::vector<double> right_;
};

inline BasisSet legendre_basis(std::size_t order, std::size_t n_quad) {
  return BasisSet(order, n_quad);
}

}  // namespace bdg
