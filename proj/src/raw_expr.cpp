#include "ib/raw_expr.hpp"

#include <cctype>

#include "ib/error.hpp"

namespace ib {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, int line, int column) : s_(text), line_(line), col0_(column) {}

  RawExpr parse() {
    RawExpr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, msg, line_, col0_ + static_cast<int>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RawExpr node(RawExpr::Kind k, size_t at) const {
    RawExpr r;
    r.kind = k;
    r.line = line_;
    r.column = col0_ + static_cast<int>(at);
    return r;
  }

  RawExpr sum() {
    RawExpr lhs = product();
    for (;;) {
      skip();
      size_t at = pos_;
      RawExpr::Kind k;
      if (accept('+'))
        k = RawExpr::Kind::Add;
      else if (accept('-'))
        k = RawExpr::Kind::Sub;
      else
        return lhs;
      RawExpr n = node(k, at);
      n.kids.push_back(std::move(lhs));
      n.kids.push_back(product());
      lhs = std::move(n);
    }
  }

  RawExpr product() {
    RawExpr lhs = unary();
    for (;;) {
      skip();
      size_t at = pos_;
      RawExpr::Kind k;
      if (accept('*'))
        k = RawExpr::Kind::Mul;
      else if (accept('/'))
        k = RawExpr::Kind::Div;
      else
        return lhs;
      RawExpr n = node(k, at);
      n.kids.push_back(std::move(lhs));
      n.kids.push_back(unary());
      lhs = std::move(n);
    }
  }

  RawExpr unary() {
    skip();
    size_t at = pos_;
    if (accept('-')) {
      if (++depth_ > kMaxDepth) fail("expression nested too deeply");
      RawExpr n = node(RawExpr::Kind::Neg, at);
      n.kids.push_back(unary());
      --depth_;
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  RawExpr power() {
    RawExpr base = primary();
    skip();
    size_t at = pos_;
    if (!accept('^')) return base;
    bool paren = accept('(');
    bool neg = accept('-');
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ - start > 6) fail("exponent too large");
    int n = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (paren && !accept(')')) fail("expected ')'");
    RawExpr p = node(RawExpr::Kind::Pow, at);
    p.exponent = neg ? -n : n;
    p.kids.push_back(std::move(base));
    return p;
  }

  RawExpr primary() {
    skip();
    size_t at = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      if (++depth_ > kMaxDepth) fail("expression nested too deeply");
      RawExpr e = sum();
      --depth_;
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      RawExpr n = node(RawExpr::Kind::Number, at);
      try {
        n.value = Rational::from_decimal(s_.substr(at, pos_ - at));
      } catch (const Error& e) {
        pos_ = at;
        fail(e.what());
      }
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(at, pos_ - at));
      if (name == "exp") {
        if (!accept('(')) fail("expected '(' after exp");
        if (++depth_ > kMaxDepth) fail("expression nested too deeply");
        RawExpr n = node(RawExpr::Kind::Exp, at);
        n.kids.push_back(sum());
        --depth_;
        if (!accept(')')) fail("expected ')'");
        return n;
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') fail("unknown function '" + name + "'");
      RawExpr n = node(RawExpr::Kind::Name, at);
      n.name = std::move(name);
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  static constexpr int kMaxDepth = 256;

  std::string_view s_;
  size_t pos_ = 0;
  int depth_ = 0;
  int line_;
  int col0_;
};

}  // namespace

RawExpr parse_raw_expression(std::string_view text, int line, int column) {
  return ExprParser(text, line, column).parse();
}

Expr normalize(const RawExpr& t, const SymbolResolver& resolve) {
  auto positioned = [&](ErrorKind k, const std::string& msg) { return Error(k, msg, t.line, t.column); };
  try {
    switch (t.kind) {
      case RawExpr::Kind::Number:
        return Expr(t.value);
      case RawExpr::Kind::Name:
        if (t.name == "im") return Expr::imaginary_unit();
        return resolve(t);
      case RawExpr::Kind::Add:
        return normalize(t.kids[0], resolve) + normalize(t.kids[1], resolve);
      case RawExpr::Kind::Sub:
        return normalize(t.kids[0], resolve) - normalize(t.kids[1], resolve);
      case RawExpr::Kind::Mul:
        return normalize(t.kids[0], resolve) * normalize(t.kids[1], resolve);
      case RawExpr::Kind::Neg:
        return -normalize(t.kids[0], resolve);
      case RawExpr::Kind::Div: {
        Expr num = normalize(t.kids[0], resolve);
        auto den = normalize(t.kids[1], resolve).rational_value();
        if (!den) throw positioned(ErrorKind::SyntaxError, "division is only allowed by a rational constant");
        if (den->is_zero()) throw positioned(ErrorKind::SyntaxError, "division by zero");
        return num * Expr(den->inverse());
      }
      case RawExpr::Kind::Pow: {
        Expr base = normalize(t.kids[0], resolve);
        if (t.exponent >= 0) return base.pow(static_cast<unsigned>(t.exponent));
        if (!base.is_unit()) throw positioned(ErrorKind::SyntaxError, "negative power of a non-invertible expression");
        return base.unit_inverse().pow(static_cast<unsigned>(-t.exponent));
      }
      case RawExpr::Kind::Exp:
        return Expr::exp(normalize(t.kids[0], resolve));
    }
  } catch (const Error& e) {
    if (e.line() != 0) throw;
    throw positioned(e.kind(), e.what());
  }
  throw positioned(ErrorKind::SyntaxError, "bad expression node");
}

Expr parse_expression(std::string_view text, const std::map<std::string, Symbol>& table) {
  RawExpr tree = parse_raw_expression(text);
  return normalize(tree, [&](const RawExpr& n) {
    auto it = table.find(n.name);
    if (it == table.end()) throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + n.name + "'", n.line, n.column);
    return Expr(it->second);
  });
}

}  // namespace ib
