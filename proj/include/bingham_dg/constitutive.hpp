#pragma once

#include "field.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bdg {

struct PhysicalParams {
  double rho = 1.0;     // kg m^-3
  double g = 9.81;      // m s^-2
  double alpha = 0.0;   // slope angle, rad
  double eta = 0.0;     // Pa s
  double sigma0 = 0.0;  // yield stress, Pa

  double g_c() const { return g * std::cos(alpha); }
  double g_s() const { return g * std::sin(alpha); }

  void validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("PhysicalParams: rho must be > 0");
    if (!(g > 0.0)) throw std::invalid_argument("PhysicalParams: g must be > 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("PhysicalParams: eta must be >= 0");
    if (!(sigma0 >= 0.0)) throw std::invalid_argument("PhysicalParams: sigma0 must be >= 0");
  }
};

enum class Regularization { Reg1 = 1, Reg2 = 2, Reg3 = 3 };

/// Ramp of the regularization slope inside one time step.
struct ContinuationSchedule {
  double gamma0 = 0.0;
  std::size_t n_gamma = 2;
};

struct RegularizationConfig {
  Regularization variant = Regularization::Reg1;
  double gamma = 1e3;  // Pa s
  double beta = 1e3;   // unused by Reg3
  std::optional<ContinuationSchedule> continuation;

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("RegularizationConfig: gamma must be > 0");
    if (variant != Regularization::Reg3 && !(beta > 0.0)) {
      throw std::invalid_argument("RegularizationConfig: beta must be > 0");
    }
    if (continuation) {
      if (continuation->n_gamma < 2) {
        throw std::invalid_argument("RegularizationConfig: continuation needs n_gamma >= 2");
      }
      if (!(continuation->gamma0 > 0.0)) {
        throw std::invalid_argument("RegularizationConfig: continuation gamma0 must be > 0");
      }
    }
  }
};

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// C^1 approximation of max(x, 0) with a quadratic blend of half-width 1/(2 beta).
inline double smooth_max(double x, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("smooth_max: beta must be > 0");
  const double half = 0.5 / beta;
  if (x >= half) return x;
  if (x <= -half) return 0.0;
  const double s = x + half;
  return 0.5 * beta * s * s;
}

inline double smooth_max_derivative(double x, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("smooth_max: beta must be > 0");
  const double half = 0.5 / beta;
  if (x >= half) return 1.0;
  if (x <= -half) return 0.0;
  return beta * (x + half);
}

inline double newtonian_stress(double strain_rate, const PhysicalParams& params) {
  return 4.0 * params.eta * strain_rate;
}

inline double plastic_stress(double strain_rate, const PhysicalParams& params,
                             const RegularizationConfig& reg) {
  const double s0 = params.sigma0;
  const double g = reg.gamma;
  const double mag = std::abs(strain_rate);
  switch (reg.variant) {
    case Regularization::Reg1: {
      const double denom = smooth_max(g * mag - s0, reg.beta) + s0;
      return 2.0 * s0 * g * strain_rate / denom;
    }
    case Regularization::Reg2: {
      const double half = 0.5 / reg.beta;
      const double a = g * mag;
      if (a >= s0 + half) return 2.0 * s0 * sign_of(strain_rate);
      if (a >= s0 - half) {
        const double d = s0 - a + half;
        return sign_of(strain_rate) * (2.0 * s0 - reg.beta * d * d);
      }
      return 2.0 * g * strain_rate;
    }
    case Regularization::Reg3:
      return 2.0 * s0 * std::tanh(g * strain_rate);
  }
  throw std::invalid_argument("plastic_stress: unknown regularization");
}

inline double plastic_stress_derivative(double strain_rate, const PhysicalParams& params,
                                        const RegularizationConfig& reg) {
  const double s0 = params.sigma0;
  const double g = reg.gamma;
  const double mag = std::abs(strain_rate);
  switch (reg.variant) {
    case Regularization::Reg1: {
      const double x = g * mag - s0;
      const double denom = smooth_max(x, reg.beta) + s0;
      return 2.0 * s0 * g / denom -
             2.0 * s0 * g * g * mag * smooth_max_derivative(x, reg.beta) / (denom * denom);
    }
    case Regularization::Reg2: {
      const double half = 0.5 / reg.beta;
      const double a = g * mag;
      if (a >= s0 + half) return 0.0;
      if (a >= s0 - half) return 2.0 * reg.beta * g * (s0 - a + half);
      return 2.0 * g;
    }
    case Regularization::Reg3: {
      const double c = std::cosh(g * strain_rate);
      return 2.0 * s0 * g / (c * c);
    }
  }
  throw std::invalid_argument("plastic_stress_derivative: unknown regularization");
}

/// Newtonian plus regularized plastic stress and d(stress)/dE.
inline std::pair<double, double> total_stress_and_derivative(double strain_rate,
                                                             const PhysicalParams& params,
                                                             const RegularizationConfig& reg) {
  return {newtonian_stress(strain_rate, params) + plastic_stress(strain_rate, params, reg),
          4.0 * params.eta + plastic_stress_derivative(strain_rate, params, reg)};
}

/// True where |E| - sigma0/gamma >= 0 (Heaviside with H(0) = 1).
inline bool is_active(double strain_rate, double sigma0, double gamma) {
  return std::abs(strain_rate) - sigma0 / gamma >= 0.0;
}

/// Percentage of the domain where the material flows, by quadrature.
inline double active_fraction(const CoefficientField& strain_rate, const Mesh1D& mesh,
                              const BasisSet& basis, double sigma0, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("active_fraction: gamma must be > 0");
  double active = 0.0;
  for (std::size_t e = 0; e < mesh.n_el(); ++e) {
    const auto c = strain_rate.element(e);
    for (std::size_t q = 0; q < basis.n_quad(); ++q) {
      if (is_active(field_at_node(c, basis, q), sigma0, gamma)) {
        active += mesh.jacobian(e) * basis.quad_weights()[q];
      }
    }
  }
  return 100.0 * active / mesh.length();
}

inline std::string to_string(Regularization r) {
  return "reg" + std::to_string(static_cast<int>(r));
}

}  // namespace bdg
