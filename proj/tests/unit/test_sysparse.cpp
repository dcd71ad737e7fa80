#include <gtest/gtest.h>

#include <random>

#include "ib/error.hpp"
#include "ib/lattice.hpp"
#include "support.hpp"

using namespace ib;

namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    parse_system(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(ParseSystem, Toy) {
  auto t = ib::test::toy();
  EXPECT_EQ(t.name, "toy");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.coord(0).name(), "x");
  EXPECT_EQ(t.coord(2).name(), "z");
  for (const auto& c : t.coords()) EXPECT_FALSE(c.odd());
  EXPECT_EQ(t.lagrangian, ib::test::ex(t, "dx^2/2 + (z + exp(-x))*dy - z*x^2/2"));
}

TEST(ParseSystem, Oscillator) {
  auto o = ib::test::oscillator();
  EXPECT_EQ(o.size(), 1u);
  EXPECT_EQ(o.velocity(0).name(), "dq");
  EXPECT_EQ(o.momentum(0).name(), "p_q");
  EXPECT_EQ(o.initial_coord(0).name(), "q0");
  EXPECT_EQ(o.initial_momentum(0).name(), "pq0");
}

TEST(ParseSystem, ExplicitTimeRejected) {
  EXPECT_EQ(parse_error("system s\ncoord x even\nL = dx*t\n"), ErrorKind::NonAutonomous);
}

TEST(ParseSystem, Diagnostics) {
  EXPECT_EQ(parse_error("system s\ncoord x even\nL = dx*w\n"), ErrorKind::UnknownSymbol);
  EXPECT_EQ(parse_error("system s\ncoord x even\nL = ddx\n"), ErrorKind::UnknownSymbol);
  EXPECT_EQ(parse_error("system s\ncoord x even\ncoord x even\nL = dx^2\n"), ErrorKind::DuplicateCoord);
  EXPECT_EQ(parse_error("system s\ncoord a odd\nL = a\n"), ErrorKind::ParityViolation);
  EXPECT_EQ(parse_error("system s\ncoord x even\nL = (dx^2\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("coord x even\nL = dx\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("system s\ncoord dx even\nL = x\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("system s\ncoord x even\nL = dx/x\n"), ErrorKind::SyntaxError);
}

TEST(ParseSystem, DiagnosticHasPosition) {
  try {
    parse_system("system s\ncoord x even\nL = dx*(x + )\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(ParseSystem, ParamsAndComments) {
  auto s = parse_system(
      "# a comment\n\nsystem s  # trailing\nparam m positive\nparam k\ncoord x even\nL = m*dx^2/2 - k*x^2/2\n");
  ASSERT_EQ(s.params.size(), 2u);
  EXPECT_TRUE(s.params[0].positive);
  EXPECT_FALSE(s.params[1].positive);
}

TEST(EmitSystem, ToyRoundTrip) {
  auto t = ib::test::toy();
  EXPECT_EQ(parse_system(emit_system(t)), t);
}

TEST(EmitSystem, SelfDualLatticeRoundTrip) {
  LatticeConfig cfg;
  cfg.n = 2;
  cfg.m = Rational(2);
  cfg.a = Rational(1, 2);
  auto s = gen_sd(cfg);
  auto back = parse_system(emit_system(s));
  EXPECT_EQ(back, s);
  EXPECT_EQ(back.metadata, s.metadata);
}

TEST(EmitSystem, OddCoordsRoundTrip) {
  LatticeConfig cfg;
  cfg.model = LatticeModel::Dirac;
  auto s = gen_dirac(cfg);
  const std::string doc = emit_system(s);
  EXPECT_NE(doc.find(" odd"), std::string::npos);
  EXPECT_EQ(parse_system(doc), s);
}

TEST(Property, ParseIsTotal) {
  const std::string alphabet = "system coord param L=+-*/^()exp im dx x y 0123456789 even odd\n#.";
  std::mt19937_64 rng(11);
  const std::string base = "system s\ncoord x even\ncoord y even\nL = dx*dy - x^2\n";
  for (int i = 0; i < 3000; ++i) {
    std::string text = base;
    int edits = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < edits; ++k) {
      size_t pos = rng() % (text.size() + 1);
      switch (rng() % 3) {
        case 0: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        case 1:
          if (pos < text.size()) text.erase(pos, 1);
          break;
        default:
          if (pos < text.size()) text[pos] = alphabet[rng() % alphabet.size()];
      }
    }
    try {
      parse_system(text);
    } catch (const Error&) {
    }
  }
  SUCCEED();
}

TEST(Property, DeepNestingIsDiagnosed) {
  std::string text = "system s\ncoord x even\nL = " + std::string(5000, '(') + "dx" + std::string(5000, ')') + "\n";
  EXPECT_THROW(parse_system(text), Error);
}
