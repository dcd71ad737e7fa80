#pragma once

#include <string>
#include <vector>

#include "ib/expr.hpp"
#include "ib/series.hpp"

namespace ib {

// Order-K Taylor solution around t=0. Coefficients are expressions in the
// initial-condition symbols; relations holds every algebraic relation among
// those symbols found while solving (each entry must vanish).
struct TaylorSolution {
  int order = 0;
  std::vector<SeriesPoly> coords;
  std::vector<SeriesPoly> momenta;
  std::vector<Expr> relations;
};

struct ICConstraint {
  Symbol eliminated;
  Expr expression;
};

struct ICConstraintSet {
  std::vector<ICConstraint> constraints;
  std::vector<Symbol> independent;
  Bindings elimination;
  std::vector<std::string> warnings;

  Expr reduce(const Expr& e) const { return substitute(e, elimination); }
};

}  // namespace ib
