#include <gtest/gtest.h>

#include "ib/dirac_oracle.hpp"
#include "ib/error.hpp"
#include "ib/lattice.hpp"
#include "support.hpp"

using namespace ib;
using ib::test::ex;
using ib::test::sym;

TEST(Oracle, ToyPrimaries) {
  auto t = ib::test::toy();
  auto p = primary_constraints(t);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].expr, ex(t, "p_y - z - exp(-x)"));
  EXPECT_EQ(p[1].expr, ex(t, "p_z"));
  EXPECT_EQ(canonical_hamiltonian(t), ex(t, "p_x^2/2 + z*x^2/2"));
}

TEST(Oracle, ToyClosureIsSecondClass) {
  auto t = ib::test::toy();
  auto cl = consistency_closure(t, primary_constraints(t));
  EXPECT_EQ(cl.constraints.size(), 2u);
  auto inv = classify_and_invert(t, cl);
  EXPECT_EQ(inv.matrix[0][1], Expr(-1));
  EXPECT_EQ(inv.matrix[1][0], Expr(1));
  EXPECT_TRUE(inv.matrix[0][0].is_zero());
  for (const auto& c : cl.constraints) EXPECT_EQ(c.cls, ConstraintClass::Second);
  ASSERT_TRUE(inv.inverse.has_value());
}

TEST(Oracle, ToyDiracBrackets) {
  auto t = ib::test::toy();
  auto cl = consistency_closure(t, primary_constraints(t));
  auto inv = classify_and_invert(t, cl);
  auto db = [&](const char* a, const char* b) { return dirac_bracket(t, cl, inv, ex(t, a), ex(t, b)); };
  EXPECT_EQ(db("x", "p_x"), Expr(1));
  EXPECT_EQ(db("z", "p_x"), ex(t, "exp(-x)"));
  EXPECT_EQ(db("y", "z"), Expr(1));
  EXPECT_TRUE(db("x", "y").is_zero());
  for (const auto& c : cl.constraints)
    for (const char* f : {"x", "y", "z", "p_x", "p_y", "p_z"})
      EXPECT_TRUE(substitute(dirac_bracket(t, cl, inv, c.expr, ex(t, f)), cl.surface).is_zero()) << f;
}

TEST(Oracle, ToyMatchesDerivedTable) {
  const auto& d = ib::test::toy_derivation();
  auto cl = consistency_closure(d.spec, primary_constraints(d.spec));
  auto cmp = compare_tables(d.spec, d.table, cl, 100, 42);
  EXPECT_EQ(cmp.points, 100u);
  EXPECT_LT(cmp.deviation, 1e-9);
}

TEST(Oracle, SerialMatchesParallel) {
  Derivation d = ib::test::toy_derivation();
  d.table.set(sym(d.spec, "y"), sym(d.spec, "z"), Expr(2), Provenance::Solved);
  auto cl = consistency_closure(d.spec, primary_constraints(d.spec));
  DiracEvaluator ev(d.spec, cl);
  std::mt19937_64 rng(9);
  auto pts = ev.draw(200, rng);
  auto a = compare_tables_serial(d.table, ev, pts), b = compare_tables(d.table, ev, pts);
  EXPECT_NEAR(a.deviation, 1.0, 1e-12);
  EXPECT_EQ(a.deviation, b.deviation);
  EXPECT_EQ(a.worst_pair, b.worst_pair);
  EXPECT_EQ(a.max_condition, b.max_condition);
}

TEST(Oracle, SelfDualClosureSize) {
  for (int n : {2, 3}) {
    LatticeConfig cfg;
    cfg.n = n;
    auto s = gen_sd(cfg);
    auto cl = consistency_closure(s, primary_constraints(s));
    EXPECT_EQ(cl.constraints.size(), static_cast<size_t>(4 * n * n)) << n;
    EXPECT_NO_THROW(classify_and_invert(s, cl));
  }
}

TEST(Oracle, SelfDualAgreesWithDerivedTable) {
  LatticeConfig cfg;
  cfg.a = Rational(1, 2);
  cfg.m = Rational(2);
  auto s = gen_sd(cfg);
  auto d = derive(s);
  EXPECT_EQ(d.table.get(s.coord(0), s.coord(1)), Expr(-8));
  auto cl = consistency_closure(s, primary_constraints(s));
  auto cmp = compare_tables(s, d.table, cl, 20, 1);
  EXPECT_LT(cmp.deviation, 1e-9) << cmp.worst_pair;
}

TEST(Oracle, GaugeSystemRejected) {
  auto s = parse_system("system gauge\ncoord x even\ncoord y even\nL = (dx - y)^2/2\n");
  auto cl = consistency_closure(s, primary_constraints(s));
  try {
    classify_and_invert(s, cl);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GaugeFreedom);
  }
}

TEST(Oracle, RegularSystemHasNoConstraints) {
  auto o = ib::test::oscillator();
  EXPECT_TRUE(primary_constraints(o).empty());
  auto cl = consistency_closure(o, {});
  EXPECT_TRUE(cl.constraints.empty());
  EXPECT_EQ(cl.hamiltonian, ex(o, "p_q^2/2 + q^2/2"));
}
