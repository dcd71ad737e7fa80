#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ib/expr.hpp"

namespace ib {

// Flattened even expression for repeated numeric evaluation. Variables are
// addressed by their position in the vector passed at construction.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, const std::vector<Symbol>& vars);

  bool is_complex() const { return complex_; }
  bool is_zero() const { return terms_.empty(); }

  template <class T>
  std::complex<T> eval_complex(const T* x) const {
    std::complex<T> total = 0;
    for (const auto& t : terms_) {
      T v = static_cast<T>(t.coeff);
      for (const auto& [i, p] : t.factors) v *= ipow(x[i], p);
      std::complex<T> c = t.imag ? std::complex<T>(0, v) : std::complex<T>(v, 0);
      if (t.exp_child >= 0) c *= std::exp(children_[static_cast<size_t>(t.exp_child)].eval_complex(x));
      total += c;
    }
    return total;
  }

  // Real evaluation; only valid when !is_complex().
  template <class T>
  T eval(const T* x) const {
    T total = 0;
    for (const auto& t : terms_) {
      T v = static_cast<T>(t.coeff);
      for (const auto& [i, p] : t.factors) v *= ipow(x[i], p);
      if (t.exp_child >= 0) v *= std::exp(children_[static_cast<size_t>(t.exp_child)].eval(x));
      total += v;
    }
    return total;
  }

 private:
  template <class T>
  static T ipow(T b, int p) {
    T r = 1;
    for (int k = 0; k < p; ++k) r *= b;
    return r;
  }

  struct Term {
    long double coeff;
    bool imag;
    std::vector<std::pair<int, int>> factors;
    int exp_child;
  };
  std::vector<Term> terms_;
  std::vector<CompiledExpr> children_;
  bool complex_ = false;
};

}  // namespace ib
