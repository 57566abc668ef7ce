#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bdg {

/// Primitive unknowns (depth, depth-averaged velocity).
struct PrimitivePair {
  double h = 0.0;
  double u = 0.0;
};

/// Conserved variables (h, h u).
struct ConservedPair {
  double h = 0.0;
  double hu = 0.0;
};

using FluxPair = std::array<double, 2>;
/// 2x2 block, row = flux component, column = (h, u).
using Jacobian2 = std::array<std::array<double, 2>, 2>;

inline ConservedPair to_conserved(const PrimitivePair& v) { return {v.h, v.h * v.u}; }

inline FluxPair physical_flux(const PrimitivePair& v, double g_c) {
  return {v.h * v.u, v.h * v.u * v.u + 0.5 * g_c * v.h * v.h};
}

inline Jacobian2 physical_flux_jacobian(const PrimitivePair& v, double g_c) {
  return {{{v.u, v.h}, {v.u * v.u + g_c * v.h, 2.0 * v.h * v.u}}};
}

inline Jacobian2 conserved_jacobian(const PrimitivePair& v) {
  return {{{1.0, 0.0}, {v.u, v.h}}};
}

struct WaveSpeeds {
  double left = 0.0;
  double right = 0.0;
};

inline WaveSpeeds wave_speeds(const PrimitivePair& vl, const PrimitivePair& vr, double g) {
  if (vl.h < 0.0 || vr.h < 0.0) throw std::domain_error("wave_speeds: negative depth");
  const double cl = std::sqrt(g * vl.h);
  const double cr = std::sqrt(g * vr.h);
  return {std::min(vl.u - cl, vr.u - cr), std::max(vl.u + cl, vr.u + cr)};
}

namespace detail {
inline void require_wet(const PrimitivePair& vl, const PrimitivePair& vr) {
  if (!(vl.h > 0.0) || !(vr.h > 0.0)) {
    throw std::domain_error("hll_flux: dry or negative depth in Riemann problem");
  }
}
}  // namespace detail

/// HLL numerical flux for F = (h u, h u^2 + g_c h^2 / 2). Wave speeds use
/// `g` so callers can choose between g and g_c there.
inline FluxPair hll_flux(const PrimitivePair& vl, const PrimitivePair& vr, double g,
                         double g_c) {
  detail::require_wet(vl, vr);
  const WaveSpeeds s = wave_speeds(vl, vr, g);
  if (s.left >= 0.0) return physical_flux(vl, g_c);
  if (s.right <= 0.0) return physical_flux(vr, g_c);
  const double span = s.right - s.left;
  if (span == 0.0) throw std::domain_error("hll_flux: coincident wave speeds");
  const FluxPair fl = physical_flux(vl, g_c);
  const FluxPair fr = physical_flux(vr, g_c);
  const ConservedPair ul = to_conserved(vl);
  const ConservedPair ur = to_conserved(vr);
  const std::array<double, 2> du{ur.h - ul.h, ur.hu - ul.hu};
  FluxPair out{};
  for (int k = 0; k < 2; ++k) {
    out[k] = (s.right * fl[k] - s.left * fr[k] + s.left * s.right * du[k]) / span;
  }
  return out;
}

enum class WaveSpeedMode {
  Frozen,  // d S / d V ignored (Newton tangent)
  Exact,   // full derivative of the piecewise-smooth flux
};

struct HllJacobian {
  Jacobian2 d_left{};
  Jacobian2 d_right{};
};

inline HllJacobian hll_flux_derivative(const PrimitivePair& vl, const PrimitivePair& vr,
                                       double g, double g_c,
                                       WaveSpeedMode mode = WaveSpeedMode::Frozen) {
  detail::require_wet(vl, vr);
  const WaveSpeeds s = wave_speeds(vl, vr, g);
  HllJacobian jac;
  if (s.left >= 0.0) {
    jac.d_left = physical_flux_jacobian(vl, g_c);
    return jac;
  }
  if (s.right <= 0.0) {
    jac.d_right = physical_flux_jacobian(vr, g_c);
    return jac;
  }
  const double span = s.right - s.left;
  if (span == 0.0) throw std::domain_error("hll_flux_derivative: coincident wave speeds");
  const Jacobian2 dfl = physical_flux_jacobian(vl, g_c);
  const Jacobian2 dfr = physical_flux_jacobian(vr, g_c);
  const Jacobian2 dul = conserved_jacobian(vl);
  const Jacobian2 dur = conserved_jacobian(vr);
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      jac.d_left[k][j] = (s.right * dfl[k][j] - s.left * s.right * dul[k][j]) / span;
      jac.d_right[k][j] = (-s.left * dfr[k][j] + s.left * s.right * dur[k][j]) / span;
    }
  }
  if (mode == WaveSpeedMode::Frozen) return jac;

  const FluxPair fl = physical_flux(vl, g_c);
  const FluxPair fr = physical_flux(vr, g_c);
  const ConservedPair ul = to_conserved(vl);
  const ConservedPair ur = to_conserved(vr);
  const std::array<double, 2> du{ur.h - ul.h, ur.hu - ul.hu};
  const double cl = std::sqrt(g * vl.h);
  const double cr = std::sqrt(g * vr.h);
  // d S / d (h, u) on each side; only the side achieving the min/max contributes
  std::array<double, 2> dsl_left{}, dsl_right{}, dsr_left{}, dsr_right{};
  if (vl.u - cl <= vr.u - cr) dsl_left = {-0.5 * g / cl, 1.0};
  else dsl_right = {-0.5 * g / cr, 1.0};
  if (vl.u + cl >= vr.u + cr) dsr_left = {0.5 * g / cl, 1.0};
  else dsr_right = {0.5 * g / cr, 1.0};
  for (int k = 0; k < 2; ++k) {
    const double num = s.right * fl[k] - s.left * fr[k] + s.left * s.right * du[k];
    const double d_sl = (-fr[k] + s.right * du[k]) / span + num / (span * span);
    const double d_sr = (fl[k] + s.left * du[k]) / span - num / (span * span);
    for (int j = 0; j < 2; ++j) {
      jac.d_left[k][j] += d_sl * dsl_left[j] + d_sr * dsr_left[j];
      jac.d_right[k][j] += d_sl * dsl_right[j] + d_sr * dsr_right[j];
    }
  }
  return jac;
}

inline std::vector<double> central_flux(std::span<const double> a_left,
                                        std::span<const double> a_right) {
  if (a_left.size() != a_right.size()) {
    throw std::invalid_argument("central_flux: length mismatch");
  }
  std::vector<double> out(a_left.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (a_left[i] + a_right[i]);
  return out;
}

inline double central_flux(double a_left, double a_right) { return 0.5 * (a_left + a_right); }

}  // namespace bdg
