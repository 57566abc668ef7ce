#include "bingham_dg/fluxes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bdg;

namespace {
constexpr double g = 9.81;

void expect_jacobian_fd(const PrimitivePair& vl, const PrimitivePair& vr, WaveSpeedMode mode,
                        double tol) {
  const HllJacobian J = hll_flux_derivative(vl, vr, g, g, mode);
  for (int side = 0; side < 2; ++side) {
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-7;
      PrimitivePair lp = vl, lm = vl, rp = vr, rm = vr;
      PrimitivePair& p = side == 0 ? lp : rp;
      PrimitivePair& m = side == 0 ? lm : rm;
      (j == 0 ? p.h : p.u) += h;
      (j == 0 ? m.h : m.u) -= h;
      const FluxPair fp = hll_flux(lp, rp, g, g);
      const FluxPair fm = hll_flux(lm, rm, g, g);
      for (int k = 0; k < 2; ++k) {
        const double fd = (fp[k] - fm[k]) / (2 * h);
        const double an = side == 0 ? J.d_left[k][j] : J.d_right[k][j];
        EXPECT_NEAR(an, fd, tol * std::max(1.0, std::abs(fd)));
      }
    }
  }
}
}  // namespace

TEST(PhysicalFlux, Examples) {
  auto f = physical_flux({1.0, 0.0}, g);
  EXPECT_DOUBLE_EQ(f[0], 0.0);
  EXPECT_DOUBLE_EQ(f[1], 4.905);
  f = physical_flux({2.0, 1.0}, g);
  EXPECT_DOUBLE_EQ(f[0], 2.0);
  EXPECT_NEAR(f[1], 21.62, 1e-12);
  f = physical_flux({1.5, 0.0}, g);
  EXPECT_NEAR(f[1], 11.03625, 1e-12);
}

TEST(WaveSpeeds, Examples) {
  auto s = wave_speeds({1.0, 0.0}, {1.0, 0.0}, g);
  EXPECT_NEAR(s.left, -std::sqrt(9.81), 1e-15);
  EXPECT_NEAR(s.right, std::sqrt(9.81), 1e-15);
  s = wave_speeds({1.5, 0.0}, {0.5, 0.0}, g);
  EXPECT_NEAR(s.left, -3.8360135557633265, 1e-14);
  EXPECT_NEAR(s.right, 3.8360135557633265, 1e-14);
  s = wave_speeds({1.0, 10.0}, {0.5, 10.0}, g);
  EXPECT_NEAR(s.left, 10.0 - std::sqrt(9.81), 1e-14);
  EXPECT_GT(s.left, 0.0);
  EXPECT_THROW(wave_speeds({-1.0, 0.0}, {1.0, 0.0}, g), std::domain_error);
}

TEST(Hll, Examples) {
  const auto same = hll_flux({1.3, 0.4}, {1.3, 0.4}, g, g);
  const auto phys = physical_flux({1.3, 0.4}, g);
  EXPECT_NEAR(same[0], phys[0], 1e-14);
  EXPECT_NEAR(same[1], phys[1], 1e-14);

  const auto sup = hll_flux({1.0, 10.0}, {0.5, 10.0}, g, g);
  EXPECT_EQ(sup, physical_flux({1.0, 10.0}, g));
  const auto sub = hll_flux({1.0, -10.0}, {0.5, -10.0}, g, g);
  EXPECT_EQ(sub, physical_flux({0.5, -10.0}, g));

  const auto dam = hll_flux({1.5, 0.0}, {0.5, 0.0}, g, g);
  EXPECT_NEAR(dam[0], 1.9180067778816633, 1e-13);
  EXPECT_NEAR(dam[1], 6.13125, 1e-13);
  EXPECT_THROW(hll_flux({0.0, 0.0}, {1.0, 0.0}, g, g), std::domain_error);
}

TEST(Hll, ConsistencyRandom) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dh(0.1, 10.0), du(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const PrimitivePair v{dh(rng), du(rng)};
    const auto a = hll_flux(v, v, g, g);
    const auto b = physical_flux(v, g);
    EXPECT_NEAR(a[0], b[0], 1e-14 * std::max(1.0, std::abs(b[0])));
    EXPECT_NEAR(a[1], b[1], 1e-14 * std::max(1.0, std::abs(b[1])));
  }
}

TEST(Hll, BranchContinuity) {
  // right state chosen so that S_L = u_r - sqrt(g h_r) -> 0 from below
  const PrimitivePair vl{1.0, std::sqrt(g) + 0.5};
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    const double hr = 1.0;
    const PrimitivePair vr{hr, std::sqrt(g * hr) - eps};
    const auto s = wave_speeds(vl, vr, g);
    ASSERT_LT(s.left, 0.0);
    const auto f = hll_flux(vl, vr, g, g);
    const auto f0 = hll_flux(vl, PrimitivePair{hr, std::sqrt(g * hr)}, g, g);
    EXPECT_NEAR(f[0], f0[0], 50 * eps);
    EXPECT_NEAR(f[1], f0[1], 50 * eps);
  }
}

TEST(HllDerivative, BranchStructure) {
  const auto up = hll_flux_derivative({1.0, 10.0}, {0.5, 10.0}, g, g);
  const auto a = physical_flux_jacobian({1.0, 10.0}, g);
  EXPECT_EQ(up.d_left, a);
  EXPECT_EQ(up.d_right, Jacobian2{});
  const auto down = hll_flux_derivative({1.0, -10.0}, {0.5, -10.0}, g, g);
  EXPECT_EQ(down.d_left, Jacobian2{});
  EXPECT_EQ(down.d_right, physical_flux_jacobian({0.5, -10.0}, g));
}

TEST(HllDerivative, ExactMatchesFiniteDifferenceAtDamBreakPair) {
  expect_jacobian_fd({1.5, 0.0}, {0.5, 0.0}, WaveSpeedMode::Exact, 1e-6);
}

TEST(HllDerivative, FrozenDropsOnlySpeedTerms) {
  // with u = 0 on both sides the frozen and exact tangents differ only through dS/dh
  const auto fr = hll_flux_derivative({1.5, 0.0}, {0.5, 0.0}, g, g, WaveSpeedMode::Frozen);
  const auto ex = hll_flux_derivative({1.5, 0.0}, {0.5, 0.0}, g, g, WaveSpeedMode::Exact);
  const double S = 3.8360135557633265;
  EXPECT_NEAR(fr.d_left[0][1], 0.5 * 1.5, 1e-14);  // S_R h_l / (S_R - S_L)
  EXPECT_NEAR(fr.d_left[0][0], S * S / (2 * S), 1e-12);
  EXPECT_NE(fr.d_left[0][0], ex.d_left[0][0]);
}

TEST(HllDerivative, RandomPairsMatchFiniteDifferences) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dh(0.1, 10.0), du(-10.0, 10.0);
  int checked = 0;
  while (checked < 100) {
    const PrimitivePair vl{dh(rng), du(rng)}, vr{dh(rng), du(rng)};
    const auto s = wave_speeds(vl, vr, g);
    if (std::abs(s.left) <= 1e-3 || std::abs(s.right) <= 1e-3) continue;
    // also stay away from switches of the min/max inside the speeds
    const double cl = std::sqrt(g * vl.h), cr = std::sqrt(g * vr.h);
    if (std::abs((vl.u - cl) - (vr.u - cr)) < 1e-3 || std::abs((vl.u + cl) - (vr.u + cr)) < 1e-3) {
      continue;
    }
    expect_jacobian_fd(vl, vr, WaveSpeedMode::Exact, 1e-6);
    ++checked;
  }
}

TEST(Central, Examples) {
  EXPECT_EQ(central_flux(2.5, 2.5), 2.5);
  EXPECT_EQ(central_flux(0.0, 2.0), 1.0);
  EXPECT_EQ(central_flux(-1.0, 3.0), 1.0);
  EXPECT_EQ(central_flux(0.3, 1.7), central_flux(1.7, 0.3));
  const std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
  const auto c = central_flux(a, b);
  EXPECT_EQ(c, (std::vector<double>{2.0, 3.0}));
  const std::vector<double> shorter{1.0};
  EXPECT_THROW(central_flux(a, shorter), std::invalid_argument);
}
