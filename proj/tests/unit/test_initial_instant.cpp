#include <gtest/gtest.h>

#include "ib/error.hpp"
#include "ib/lattice.hpp"
#include "support.hpp"

using namespace ib;
using ib::test::ex;
using ib::test::sym;

TEST(TaylorSolve, ToyCoefficients) {
  auto t = ib::test::toy();
  auto ts = taylor_solve(t, 3);
  auto ics = detect_ic_constraints(t, ts);
  auto c = [&](size_t i, int n) { return ics.reduce(ts.coords.at(i).coeff(n)); };
  EXPECT_EQ(c(0, 0), ex(t, "x0"));
  EXPECT_EQ(c(0, 1), ex(t, "px0"));
  EXPECT_EQ(c(1, 1), ex(t, "x0^2/2"));
  EXPECT_EQ(c(2, 1), ex(t, "exp(-x0)*px0"));
  EXPECT_EQ(c(0, 2), ex(t, "-exp(-x0)*x0^2/2 - z0*x0"));
  // y'' = x x'
  EXPECT_EQ(c(1, 2), ex(t, "x0*px0"));
}

TEST(TaylorSolve, ToyConstraints) {
  auto t = ib::test::toy();
  auto ics = detect_ic_constraints(t, taylor_solve(t, 3));
  ASSERT_EQ(ics.independent.size(), 4u);
  EXPECT_EQ(ics.independent[0], sym(t, "x0"));
  EXPECT_EQ(ics.independent[1], sym(t, "y0"));
  EXPECT_EQ(ics.independent[2], sym(t, "z0"));
  EXPECT_EQ(ics.independent[3], sym(t, "px0"));
  EXPECT_EQ(ics.reduce(ex(t, "py0")), ex(t, "z0 + exp(-x0)"));
  EXPECT_TRUE(ics.reduce(ex(t, "pz0")).is_zero());
}

TEST(TaylorSolve, OscillatorIsRegular) {
  auto o = ib::test::oscillator();
  auto ts = taylor_solve(o, 4);
  EXPECT_TRUE(ts.relations.empty());
  auto ics = detect_ic_constraints(o, ts);
  EXPECT_EQ(ics.independent.size(), 2u);
  EXPECT_EQ(ts.coords[0].coeff(2), ex(o, "-q0"));
  EXPECT_EQ(ts.coords[0].coeff(3), ex(o, "-pq0"));
  EXPECT_EQ(ts.coords[0].coeff(4), ex(o, "q0"));
}

TEST(TaylorSolve, SelfDualIndependentCount) {
  for (int n : {2, 3}) {
    LatticeConfig cfg;
    cfg.n = n;
    auto s = gen_sd(cfg);
    auto ics = detect_ic_constraints(s, taylor_solve(s, 3));
    EXPECT_EQ(ics.independent.size(), static_cast<size_t>(2 * n * n)) << n;
    for (const auto& c : ics.independent) EXPECT_EQ(kind_of(c), SymbolKind::InitialCoord) << c.name();
  }
}

TEST(TaylorSolve, InconsistentSystem) {
  auto s = parse_system("system bad\ncoord x even\nL = x\n");
  try {
    taylor_solve(s, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Inconsistent);
  }
}

TEST(SelectIndependent, PolicyChangesEliminatedSymbol) {
  auto t = ib::test::toy();
  std::vector<Expr> rel = {ex(t, "py0 - z0 - exp(-x0)"), ex(t, "pz0")};
  auto dflt = select_independent(t, rel);
  ASSERT_EQ(dflt.constraints.size(), 2u);
  EXPECT_EQ(dflt.constraints[0].eliminated, sym(t, "py0"));

  SelectionPolicy coords_first{false, true};
  auto alt = select_independent(t, rel, coords_first);
  EXPECT_EQ(alt.constraints[0].eliminated, sym(t, "z0"));
  EXPECT_EQ(alt.constraints[0].expression, ex(t, "py0 - exp(-x0)"));
}

TEST(SelectIndependent, ConstantRelationIsInconsistent) {
  auto t = ib::test::toy();
  EXPECT_THROW(select_independent(t, {ex(t, "pz0"), ex(t, "pz0 + 1")}), Error);
}

TEST(Property, SeriesSatisfiesEquationsOfMotion) {
  std::vector<SystemSpec> specs = {ib::test::toy(), ib::test::oscillator()};
  LatticeConfig cfg;
  specs.push_back(gen_sd(cfg));
  for (const auto& spec : specs) {
    const int k = 4;
    auto ts = taylor_solve(spec, k);
    auto ics = detect_ic_constraints(spec, ts);
    for (const auto& eq : euler_lagrange(spec).equations) {
      auto s = along_solution(spec, ts, eq.expr, k - 2);
      for (int n = 0; n <= k - 2; ++n)
        EXPECT_TRUE(ics.reduce(s.coeff(n)).is_zero()) << spec.name << " " << eq.expr.str() << " order " << n;
    }
    for (const auto& r : ts.relations) EXPECT_TRUE(ics.reduce(r).is_zero()) << spec.name;
  }
}

TEST(Property, MomentaMatchDefinition) {
  auto t = ib::test::toy();
  auto ts = taylor_solve(t, 3);
  auto ics = detect_ic_constraints(t, ts);
  auto p = momenta(t);
  for (size_t i = 0; i < t.size(); ++i) {
    auto s = along_solution(t, ts, p[i], 2);
    for (int n = 0; n <= 2; ++n) EXPECT_EQ(ics.reduce(s.coeff(n)), ics.reduce(ts.momenta[i].coeff(n)));
  }
}
