#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ib/expr.hpp"

namespace ib {

// Truncated series sum_n c_n t^n / n! with symbolic coefficients. The
// derivative-style normalization makes d/dt a plain shift.
class SeriesPoly {
 public:
  SeriesPoly() : c_(1) {}
  explicit SeriesPoly(std::vector<Expr> coeffs);
  static SeriesPoly constant(const Expr& c, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  // Throws std::out_of_range for n > order().
  const Expr& coeff(int n) const { return c_.at(static_cast<size_t>(n)); }
  const std::vector<Expr>& coeffs() const { return c_; }

  SeriesPoly truncated(int order) const;
  SeriesPoly derivative() const;
  SeriesPoly map(const std::function<Expr(const Expr&)>& f) const;

  friend SeriesPoly operator+(const SeriesPoly& a, const SeriesPoly& b);
  friend SeriesPoly operator-(const SeriesPoly& a, const SeriesPoly& b);
  friend SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b);
  friend SeriesPoly operator*(const Expr& a, const SeriesPoly& b);
  friend bool operator==(const SeriesPoly& a, const SeriesPoly& b) { return a.c_ == b.c_; }

 private:
  std::vector<Expr> c_;
};

Rational binomial(int n, int k);

SeriesPoly series_exp(const SeriesPoly& s);

// Series of e after replacing each bound symbol by its series; unbound
// symbols are constants.
SeriesPoly compose(const Expr& e, const std::map<Symbol, SeriesPoly>& subs, int order);

}  // namespace ib
