#include <gtest/gtest.h>

#include "ib/lattice.hpp"
#include "ib/mechanics.hpp"
#include "support.hpp"

using namespace ib;
using ib::test::ex;

TEST(Momenta, Toy) {
  auto t = ib::test::toy();
  auto p = momenta(t);
  EXPECT_EQ(p[0], ex(t, "dx"));
  EXPECT_EQ(p[1], ex(t, "z + exp(-x)"));
  EXPECT_TRUE(p[2].is_zero());
}

TEST(Momenta, Oscillator) {
  auto o = ib::test::oscillator();
  EXPECT_EQ(momenta(o)[0], ex(o, "dq"));
}

TEST(Momenta, SelfDualSite) {
  LatticeConfig cfg;
  auto s = gen_sd(cfg);
  auto p = momenta(s);
  // f1, f2 of site (0,0), then f0 of (0,0) at index 8
  EXPECT_EQ(p[0], ex(s, "-f2_0_0/2"));
  EXPECT_EQ(p[1], ex(s, "f1_0_0/2"));
  EXPECT_TRUE(p[8].is_zero());
}

TEST(EulerLagrange, Toy) {
  auto t = ib::test::toy();
  auto el = euler_lagrange(t);
  ASSERT_EQ(el.equations.size(), 3u);
  Expr ddx(t.accel(0));
  EXPECT_EQ(el.equations[0].expr, ddx + ex(t, "exp(-x)*dy + z*x"));
  EXPECT_EQ(el.equations[0].kind, EquationKind::Dynamical);
  EXPECT_EQ(el.equations[1].expr, ex(t, "dz - exp(-x)*dx"));
  EXPECT_EQ(el.equations[1].kind, EquationKind::FirstOrder);
  EXPECT_EQ(el.equations[2].expr, ex(t, "x^2/2 - dy"));
  EXPECT_EQ(el.equations[2].kind, EquationKind::FirstOrder);
}

TEST(EulerLagrange, Oscillator) {
  auto o = ib::test::oscillator();
  auto el = euler_lagrange(o);
  EXPECT_EQ(el.equations[0].expr, Expr(o.accel(0)) + ex(o, "q"));
}

TEST(EulerLagrange, SelfDualKinds) {
  LatticeConfig cfg;
  cfg.n = 3;
  auto s = gen_sd(cfg);
  auto el = euler_lagrange(s);
  for (size_t i = 0; i < s.size(); ++i) {
    bool f0 = s.coord(i).name().rfind("f0_", 0) == 0;
    EXPECT_EQ(el.equations[i].kind, f0 ? EquationKind::Algebraic : EquationKind::FirstOrder) << s.coord(i).name();
  }
  // f0 at (0,0) couples to the central-difference curl of (f1, f2)
  EXPECT_EQ(el.equations[18].expr, ex(s, "(f2_2_0 - f2_1_0 + f1_0_1 - f1_0_2)/2 - f0_0_0"));
}

TEST(EulerLagrange, SelfDualTwoSitesDecouplesF0) {
  LatticeConfig cfg;
  auto s = gen_sd(cfg);
  EXPECT_EQ(euler_lagrange(s).equations[8].expr, ex(s, "-f0_0_0"));
}

TEST(EulerLagrange, TotalDerivativeShiftInvariant) {
  auto t = ib::test::toy();
  auto shifted = t;
  // F = x^2 y + z^3, dF/dt = 2 x y dx + x^2 dy + 3 z^2 dz
  shifted.lagrangian = t.lagrangian + total_time_derivative(t, ex(t, "x^2*y + z^3"));
  auto a = euler_lagrange(t), b = euler_lagrange(shifted);
  for (size_t i = 0; i < t.size(); ++i) EXPECT_EQ(a.equations[i].expr, b.equations[i].expr);
}

TEST(Hamiltonian, Toy) {
  const auto& d = ib::test::toy_derivation();
  EXPECT_EQ(d.hamiltonian, ex(d.spec, "px0^2/2 + x0^2*z0/2"));
}

TEST(Hamiltonian, OscillatorIsTextbook) {
  auto o = ib::test::oscillator();
  auto ts = taylor_solve(o, 3);
  auto ics = detect_ic_constraints(o, ts);
  EXPECT_EQ(hamiltonian_at_initial(o, ts, ics), ex(o, "pq0^2/2 + q0^2/2"));
}

TEST(Hamiltonian, SelfDualIsQuadratic) {
  LatticeConfig cfg;
  auto s = gen_sd(cfg);
  auto ts = taylor_solve(s, 3);
  auto ics = detect_ic_constraints(s, ts);
  Expr h = hamiltonian_at_initial(s, ts, ics);
  for (const auto& m : h.terms()) {
    int deg = 0;
    for (const auto& [sym, p] : m.powers) deg += p;
    EXPECT_EQ(deg, 2);
  }
  for (const auto& v : symbols_of(h)) EXPECT_EQ(v.name().rfind("f0", 0), std::string::npos) << v.name();
}

TEST(Hamiltonian, ConservedAlongSeries) {
  for (auto spec : {ib::test::toy(), ib::test::oscillator()}) {
    auto ts = taylor_solve(spec, 4);
    auto ics = detect_ic_constraints(spec, ts);
    auto hs = along_solution(spec, ts, energy_function(spec), 3);
    for (int n = 1; n <= 3; ++n) EXPECT_TRUE(ics.reduce(hs.coeff(n)).is_zero()) << spec.name << " order " << n;
  }
}
