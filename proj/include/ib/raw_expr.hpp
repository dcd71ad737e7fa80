#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ib/expr.hpp"

namespace ib {

// Parse tree for the DSL expression grammar, prior to normalization.
struct RawExpr {
  enum class Kind { Number, Name, Add, Sub, Mul, Div, Neg, Pow, Exp };
  Kind kind = Kind::Number;
  Rational value;
  std::string name;
  int exponent = 0;
  std::vector<RawExpr> kids;
  int line = 0;
  int column = 0;
};

// Grammar: sums of products; '^' binds tighter than unary minus, which binds
// tighter than '*' and '/'. Exponents are integer literals. `column` is the
// 1-based column of text[0] in its source line.
RawExpr parse_raw_expression(std::string_view text, int line = 1, int column = 1);

using SymbolResolver = std::function<Expr(const RawExpr& name_node)>;

// `im` is the imaginary unit; every other name goes through resolve.
Expr normalize(const RawExpr& tree, const SymbolResolver& resolve);

// Parses with a plain name table; unknown names raise UnknownSymbol.
Expr parse_expression(std::string_view text, const std::map<std::string, Symbol>& table);

}  // namespace ib
