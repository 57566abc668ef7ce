#pragma once

#include "block_tridiagonal.hpp"
#include "constitutive.hpp"
#include "fluxes.hpp"
#include "problem.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bdg {

inline constexpr double kMinDepth = 1e-12;

struct TraceValues {
  double h = 0.0;
  double u = 0.0;
  double E = 0.0;
};

/// Exterior (ghost) traces at x_left and x_right.
struct ExteriorTraces {
  TraceValues left;
  TraceValues right;
};

inline ExteriorTraces boundary_traces(const SolutionState& state, const ProblemSetup& setup) {
  const std::size_t last = state.n_el() - 1;
  const auto pick = [](const BoundaryCondition& bc, double interior) {
    return bc.is_dirichlet() ? bc.value : interior;
  };
  ExteriorTraces out;
  out.left.h = pick(setup.bc.left.h, field_trace(state.h.element(0), setup.h_basis, -1));
  out.left.u = pick(setup.bc.left.u, field_trace(state.u.element(0), setup.u_basis, -1));
  out.left.E = pick(setup.bc.left.E, field_trace(state.E.element(0), setup.E_basis, -1));
  out.right.h = pick(setup.bc.right.h, field_trace(state.h.element(last), setup.h_basis, 1));
  out.right.u = pick(setup.bc.right.u, field_trace(state.u.element(last), setup.u_basis, 1));
  out.right.E = pick(setup.bc.right.E, field_trace(state.E.element(last), setup.E_basis, 1));
  return out;
}

namespace detail {

// Where a one-sided interface value comes from: a trace of some element, or a
// prescribed constant (no dependence on the unknowns).
struct TraceSource {
  std::optional<std::size_t> element;
  int side = 0;
  double value = 0.0;
};

inline void check_depth(double h, std::size_t e, const char* where) {
  if (!(h >= kMinDepth) || !std::isfinite(h)) {
    throw StateValidityError(std::string("non-positive depth ") + std::to_string(h) +
                             " in element " + std::to_string(e) + " (" + where + ")");
  }
}

struct Layout {
  std::size_t nh, nu, nE, nb;
  std::size_t off(int var) const { return var == 0 ? 0 : (var == 1 ? nh : nh + nu); }
  std::size_t count(int var) const { return var == 0 ? nh : (var == 1 ? nu : nE); }
};

inline const BasisSet& basis_of(const ProblemSetup& s, int var) {
  return var == 0 ? s.h_basis : (var == 1 ? s.u_basis : s.E_basis);
}
inline const CoefficientField& field_of(const SolutionState& st, int var) {
  return var == 0 ? st.h : (var == 1 ? st.u : st.E);
}
inline const BoundaryCondition& bc_of(const SideConditions& sc, int var) {
  return var == 0 ? sc.h : (var == 1 ? sc.u : sc.E);
}

/// Residual (packed, element-major) and optionally the Jacobian. With
/// `with_V == false` only the strain-rate rows are formed and the depth is
/// never touched, so the E equation can be checked on dry test states.
inline void assemble_into(const SolutionState& cur, const SolutionState* old, double dt,
                          const ProblemSetup& setup, bool with_V, std::vector<double>& res,
                          BlockTridiagonal* jac, std::vector<double>* scale = nullptr) {
  const std::size_t n_el = setup.mesh.n_el();
  if (cur.n_el() != n_el) throw std::invalid_argument("assemble: state/mesh mismatch");
  const Layout lay{setup.orders.h + 1, setup.orders.u + 1, setup.orders.E + 1,
                   cur.block_size()};
  if (with_V && !(dt > 0.0)) throw std::invalid_argument("assemble: dt must be > 0");
  res.assign(n_el * lay.nb, 0.0);
  if (jac) jac->set_zero();
  if (scale) scale->assign(n_el * lay.nb, 0.0);
  // sum of |individual terms| per row, the size of the roundoff in res
  const auto mag = [&](std::size_t idx, double t) {
    if (scale) (*scale)[idx] += std::abs(t);
  };

  const PhysicalParams& p = setup.params;
  const double gc = p.g_c();
  const double gs = p.g_s();
  const double gw = setup.wave_gravity();
  const double rho = p.rho;

  // ---- interface terms
  for (std::size_t k = 0; k <= n_el; ++k) {
    std::array<TraceSource, 3> src_l, src_r;
    for (int var = 0; var < 3; ++var) {
      if (k > 0) {
        src_l[var] = {k - 1, 1, 0.0};
      } else {
        const auto& bc = bc_of(setup.bc.left, var);
        src_l[var] = bc.is_dirichlet() ? TraceSource{std::nullopt, 0, bc.value}
                                       : TraceSource{std::size_t{0}, -1, 0.0};
      }
      if (k < n_el) {
        src_r[var] = {k, -1, 0.0};
      } else {
        const auto& bc = bc_of(setup.bc.right, var);
        src_r[var] = bc.is_dirichlet() ? TraceSource{std::nullopt, 0, bc.value}
                                       : TraceSource{n_el - 1, 1, 0.0};
      }
    }
    const auto eval = [&](const TraceSource& s, int var) {
      if (!s.element) return s.value;
      return field_trace(field_of(cur, var).element(*s.element), basis_of(setup, var), s.side);
    };
    std::array<double, 3> vl{}, vr{};
    for (int var = 0; var < 3; ++var) {
      if (var == 0 && !with_V) continue;
      vl[var] = eval(src_l[var], var);
      vr[var] = eval(src_r[var], var);
    }

    // flux vector (F1, F2 - Qhat, -Ghat) and d/d(hl, ul, El, hr, ur, Er)
    std::array<double, 3> phi{};
    std::array<std::array<double, 6>, 3> dphi{};
    phi[2] = -central_flux(vl[1], vr[1]);
    dphi[2][1] = -0.5;
    dphi[2][4] = -0.5;
    if (with_V) {
      check_depth(vl[0], k == 0 ? 0 : k - 1, "interface trace");
      check_depth(vr[0], k == n_el ? n_el - 1 : k, "interface trace");
      const PrimitivePair pl{vl[0], vl[1]}, pr{vr[0], vr[1]};
      const FluxPair f = hll_flux(pl, pr, gw, gc);
      const auto [sl, dsl] = total_stress_and_derivative(vl[2], p, setup.reg);
      const auto [sr, dsr] = total_stress_and_derivative(vr[2], p, setup.reg);
      phi[0] = f[0];
      phi[1] = f[1] - central_flux(vl[0] * sl, vr[0] * sr) / rho;
      if (jac) {
        const HllJacobian d = hll_flux_derivative(pl, pr, gw, gc, setup.tangent_mode);
        for (int c = 0; c < 2; ++c) {
          for (int j = 0; j < 2; ++j) {
            dphi[c][j] = d.d_left[c][j];
            dphi[c][3 + j] = d.d_right[c][j];
          }
        }
        dphi[1][0] -= 0.5 * sl / rho;
        dphi[1][2] -= 0.5 * vl[0] * dsl / rho;
        dphi[1][3] -= 0.5 * sr / rho;
        dphi[1][5] -= 0.5 * vr[0] * dsr / rho;
      }
    }

    // (element, side, sign): left element sees the interface at xi = +1 with n = +1
    std::array<std::optional<std::size_t>, 2> owners{
        k > 0 ? std::optional<std::size_t>(k - 1) : std::nullopt,
        k < n_el ? std::optional<std::size_t>(k) : std::nullopt};
    const std::array<int, 2> sides{1, -1};
    const std::array<double, 2> signs{1.0, -1.0};
    for (int o = 0; o < 2; ++o) {
      if (!owners[o]) continue;
      const std::size_t e = *owners[o];
      for (int a = with_V ? 0 : 2; a < 3; ++a) {
        const BasisSet& ba = basis_of(setup, a);
        for (std::size_t i = 0; i < lay.count(a); ++i) {
          const double test = signs[o] * ba.trace(sides[o], i);
          res[e * lay.nb + lay.off(a) + i] += test * phi[a];
          mag(e * lay.nb + lay.off(a) + i, test * phi[a]);
          if (!jac) continue;
          for (int col = 0; col < 6; ++col) {
            const double d = dphi[a][col];
            if (d == 0.0) continue;
            const int b = col % 3;
            const TraceSource& s = col < 3 ? src_l[b] : src_r[b];
            if (!s.element) continue;
            const BasisSet& bb = basis_of(setup, b);
            for (std::size_t j = 0; j < lay.count(b); ++j) {
              jac->at(e, *s.element, lay.off(a) + i, lay.off(b) + j) +=
                  test * d * bb.trace(s.side, j);
            }
          }
        }
      }
    }
  }

  // ---- volume terms
  const std::size_t nq = setup.h_basis.n_quad();
  const auto& wq = setup.h_basis.quad_weights();
  const BasisSet& bh = setup.h_basis;
  const BasisSet& bu = setup.u_basis;
  const BasisSet& bE = setup.E_basis;
  for (std::size_t e = 0; e < n_el; ++e) {
    const double J = setup.mesh.jacobian(e);
    const double inv = 1.0 / J;
    const auto ch = cur.h.element(e);
    const auto cu = cur.u.element(e);
    const auto cE = cur.E.element(e);
    double* r = res.data() + e * lay.nb;
    if (with_V) {
      const double hl = field_trace(ch, bh, -1), hr = field_trace(ch, bh, 1);
      check_depth(hl, e, "element trace");
      check_depth(hr, e, "element trace");
    }
    for (std::size_t q = 0; q < nq; ++q) {
      const double jw = J * wq[q];
      const double u = field_at_node(cu, bu, q);
      const double E = field_at_node(cE, bE, q);
      // E rows
      for (std::size_t i = 0; i < lay.nE; ++i) {
        r[lay.off(2) + i] += jw * (bE.value(q, i) * E + inv * bE.deriv(q, i) * u);
        mag(e * lay.nb + lay.off(2) + i,
            jw * (std::abs(bE.value(q, i) * E) + std::abs(inv * bE.deriv(q, i) * u)));
      }
      if (jac) {
        for (std::size_t i = 0; i < lay.nE; ++i) {
          for (std::size_t j = 0; j < lay.nE; ++j) {
            jac->at(e, e, lay.off(2) + i, lay.off(2) + j) += jw * bE.value(q, i) * bE.value(q, j);
          }
          for (std::size_t j = 0; j < lay.nu; ++j) {
            jac->at(e, e, lay.off(2) + i, lay.off(1) + j) += jw * inv * bE.deriv(q, i) * bu.value(q, j);
          }
        }
      }
      if (!with_V) continue;

      const double h = field_at_node(ch, bh, q);
      check_depth(h, e, "quadrature point");
      const double h0 = field_at_node(old->h.element(e), bh, q);
      const double u0 = field_at_node(old->u.element(e), bu, q);
      const double dH =
          inv * field_slope_at_node(setup.bottom.element(e), setup.bottom_basis, q);
      const auto [sig, dsig] = total_stress_and_derivative(E, p, setup.reg);

      const double mass_h = (h - h0) / dt;
      const double mass_u = (h * u - h0 * u0) / dt;
      const double f1 = h * u;
      const double f2 = h * u * u + 0.5 * gc * h * h - h * sig / rho;
      const double src = gs * h + gc * h * dH;
      for (std::size_t i = 0; i < lay.nh; ++i) {
        r[i] += jw * (bh.value(q, i) * mass_h - inv * bh.deriv(q, i) * f1);
        mag(e * lay.nb + i, jw * (std::abs(bh.value(q, i)) * (std::abs(h) + std::abs(h0)) / dt +
                                  std::abs(inv * bh.deriv(q, i) * f1)));
      }
      for (std::size_t i = 0; i < lay.nu; ++i) {
        r[lay.off(1) + i] +=
            jw * (bu.value(q, i) * (mass_u + src) - inv * bu.deriv(q, i) * f2);
        mag(e * lay.nb + lay.off(1) + i,
            jw * (std::abs(bu.value(q, i)) *
                      ((std::abs(h * u) + std::abs(h0 * u0)) / dt + gs * h + gc * h * std::abs(dH)) +
                  std::abs(inv * bu.deriv(q, i)) *
                      (h * u * u + 0.5 * gc * h * h + std::abs(h * sig / rho))));
      }
      if (!jac) continue;
      for (std::size_t i = 0; i < lay.nh; ++i) {
        const double vi = bh.value(q, i), di = inv * bh.deriv(q, i);
        for (std::size_t j = 0; j < lay.nh; ++j) {
          jac->at(e, e, i, j) += jw * (vi / dt - di * u) * bh.value(q, j);
        }
        for (std::size_t j = 0; j < lay.nu; ++j) {
          jac->at(e, e, i, lay.off(1) + j) += jw * (-di * h) * bu.value(q, j);
        }
      }
      for (std::size_t i = 0; i < lay.nu; ++i) {
        const double vi = bu.value(q, i), di = inv * bu.deriv(q, i);
        const std::size_t row = lay.off(1) + i;
        const double dh = vi * (u / dt + gs + gc * dH) - di * (u * u + gc * h - sig / rho);
        const double du = vi * h / dt - di * 2.0 * h * u;
        const double dE = di * h * dsig / rho;
        for (std::size_t j = 0; j < lay.nh; ++j) jac->at(e, e, row, j) += jw * dh * bh.value(q, j);
        for (std::size_t j = 0; j < lay.nu; ++j) {
          jac->at(e, e, row, lay.off(1) + j) += jw * du * bu.value(q, j);
        }
        for (std::size_t j = 0; j < lay.nE; ++j) {
          jac->at(e, e, row, lay.off(2) + j) += jw * dE * bE.value(q, j);
        }
      }
    }
  }
}

}  // namespace detail

/// Full residual in packed layout (see SolutionState::pack).
inline std::vector<double> residual(const SolutionState& cur, const SolutionState& old, double dt,
                                    const ProblemSetup& setup) {
  std::vector<double> r;
  detail::assemble_into(cur, &old, dt, setup, true, r, nullptr);
  return r;
}

struct Assembly {
  std::vector<double> residual;
  BlockTridiagonal jacobian;
  /// Per row, the sum of magnitudes of the terms that make up the residual.
  std::vector<double> term_magnitude;
};

inline Assembly assemble(const SolutionState& cur, const SolutionState& old, double dt,
                         const ProblemSetup& setup) {
  Assembly a{{}, BlockTridiagonal(setup.mesh.n_el(), cur.block_size()), {}};
  detail::assemble_into(cur, &old, dt, setup, true, a.residual, &a.jacobian,
                        &a.term_magnitude);
  return a;
}

inline BlockTridiagonal jacobian_blocks(const SolutionState& cur, const SolutionState& old,
                                        double dt, const ProblemSetup& setup) {
  return assemble(cur, old, dt, setup).jacobian;
}

using ElementBlocks = std::vector<std::vector<double>>;

/// Momentum/mass rows per element, length (m1+1)+(m2+1).
inline ElementBlocks residual_V(const SolutionState& cur, const SolutionState& old, double dt,
                                const ProblemSetup& setup) {
  const std::vector<double> r = residual(cur, old, dt, setup);
  const std::size_t nb = cur.block_size();
  const std::size_t nv = cur.h.block_size() + cur.u.block_size();
  ElementBlocks out(cur.n_el());
  for (std::size_t e = 0; e < cur.n_el(); ++e) {
    out[e].assign(r.begin() + e * nb, r.begin() + e * nb + nv);
  }
  return out;
}

/// Strain-rate rows per element, length m3+1. Independent of the depth.
inline ElementBlocks residual_E(const SolutionState& state, const ProblemSetup& setup) {
  std::vector<double> r;
  detail::assemble_into(state, nullptr, 0.0, setup, false, r, nullptr);
  const std::size_t nb = state.block_size();
  const std::size_t nv = state.h.block_size() + state.u.block_size();
  ElementBlocks out(state.n_el());
  for (std::size_t e = 0; e < state.n_el(); ++e) {
    out[e].assign(r.begin() + e * nb + nv, r.begin() + (e + 1) * nb);
  }
  return out;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace bdg
