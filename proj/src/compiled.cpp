#include "ib/compiled.hpp"

#include <algorithm>

#include "ib/error.hpp"

namespace ib {

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<Symbol>& vars) {
  for (const auto& m : e.terms()) {
    if (!m.odd.empty()) throw Error(ErrorKind::OddEvaluation, "numeric evaluation of an odd generator");
    Term t;
    t.coeff = m.coeff.to_long_double();
    t.imag = m.imag;
    complex_ = complex_ || m.imag;
    for (const auto& [s, p] : m.powers) {
      auto it = std::find(vars.begin(), vars.end(), s);
      if (it == vars.end()) throw Error(ErrorKind::UnboundSymbol, "unbound symbol '" + s.name() + "'");
      t.factors.emplace_back(static_cast<int>(it - vars.begin()), p);
    }
    t.exp_child = -1;
    if (!m.exp_arg.is_zero()) {
      children_.emplace_back(m.exp_arg, vars);
      complex_ = complex_ || children_.back().is_complex();
      t.exp_child = static_cast<int>(children_.size() - 1);
    }
    terms_.push_back(std::move(t));
  }
}

}  // namespace ib
