#include <gtest/gtest.h>

#include "ib/error.hpp"
#include "ib/lattice.hpp"
#include "support.hpp"

using namespace ib;

namespace {

void expect_matches_closed_form(const LatticeConfig& cfg) {
  auto spec = generate(cfg);
  auto d = derive(spec);
  auto want = expected_table(cfg, spec);
  for (const auto& e : want.entries())
    EXPECT_EQ(d.table.get(e.a, e.b), e.value) << to_string(cfg.model) << " {" << e.a.name() << "," << e.b.name() << "}";
}

}  // namespace

TEST(Lattice, Counts) {
  for (int n : {2, 3, 4}) {
    LatticeConfig cfg;
    cfg.n = n;
    EXPECT_EQ(gen_sd(cfg).size(), static_cast<size_t>(3 * n * n));
    cfg.model = LatticeModel::Dirac;
    auto s = gen_dirac(cfg);
    EXPECT_EQ(s.size(), static_cast<size_t>(8 * n));
    for (const auto& c : s.coords()) EXPECT_TRUE(c.odd());
  }
}

TEST(Lattice, Naming) {
  LatticeConfig cfg;
  auto sd = gen_sd(cfg);
  EXPECT_EQ(sd.coord(0).name(), "f1_0_0");
  EXPECT_EQ(sd.coord(1).name(), "f2_0_0");
  EXPECT_EQ(sd.coord(2).name(), "f1_0_1");
  EXPECT_EQ(sd.coord(8).name(), "f0_0_0");
  cfg.model = LatticeModel::Dirac;
  auto dirac = gen_dirac(cfg);
  EXPECT_EQ(dirac.coord(0).name(), "psi1_0");
  EXPECT_EQ(dirac.coord(4).name(), "psi1_1");
  EXPECT_EQ(dirac.coord(8).name(), "psic1_0");
}

TEST(Lattice, Validation) {
  LatticeConfig cfg;
  cfg.n = 1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.n = 2;
  cfg.a = Rational(0);
  EXPECT_THROW(cfg.validate(), Error);
  cfg.a = Rational(1);
  cfg.m = Rational(-1);
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_model("sd"), LatticeModel::SelfDual);
  EXPECT_EQ(parse_model("dirac"), LatticeModel::Dirac);
  EXPECT_THROW(parse_model("maxwell"), Error);
}

TEST(Lattice, RoundTrip) {
  for (auto model : {LatticeModel::SelfDual, LatticeModel::Dirac}) {
    LatticeConfig cfg;
    cfg.model = model;
    cfg.n = 3;
    cfg.a = Rational(3, 4);
    auto s = generate(cfg);
    EXPECT_EQ(parse_system(emit_system(s)), s) << to_string(model);
  }
}

TEST(Lattice, LagrangianScalesWithSpacing) {
  // momenta carry the a^2 volume factor
  LatticeConfig one, half;
  half.a = Rational(1, 2);
  auto s1 = gen_sd(one), s2 = gen_sd(half);
  auto p1 = momenta(s1), p2 = momenta(s2);
  EXPECT_EQ(p2[0], Expr(Rational(1, 4)) * p1[0]);
}

TEST(Lattice, SelfDualMatchesClosedForm) {
  for (int n : {2, 3})
    for (auto [a, m] : std::vector<std::pair<Rational, Rational>>{{Rational(1), Rational(1)}, {Rational(1, 2), Rational(2)}}) {
      LatticeConfig cfg;
      cfg.n = n;
      cfg.a = a;
      cfg.m = m;
      expect_matches_closed_form(cfg);
    }
}

TEST(Lattice, SelfDualOnSiteValue) {
  LatticeConfig cfg;
  cfg.a = Rational(1, 2);
  cfg.m = Rational(2);
  auto spec = gen_sd(cfg);
  auto t = expected_table(cfg, spec);
  EXPECT_EQ(t.get(spec.coord(0), spec.coord(1)), Expr(-8));
  EXPECT_TRUE(t.get(spec.coord(0), spec.coord(3)).is_zero());
}

TEST(Lattice, DiracMatchesClosedForm) {
  for (auto a : {Rational(1), Rational(1, 2)}) {
    LatticeConfig cfg;
    cfg.model = LatticeModel::Dirac;
    cfg.a = a;
    expect_matches_closed_form(cfg);
  }
}
