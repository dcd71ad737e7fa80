#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ib/rational.hpp"
#include "ib/symbol.hpp"

namespace ib {

struct Monomial;

enum class Side { Left, Right };

// Immutable graded polynomial over the atoms {even symbols, exp(even poly)}
// with an ordered product of odd generators per monomial. Always stored in
// canonical form, so structural equality is mathematical equality.
class Expr {
 public:
  Expr();
  Expr(const Rational& c);  // NOLINT(implicit)
  Expr(int64_t c) : Expr(Rational(c)) {}  // NOLINT(implicit)
  Expr(int c) : Expr(Rational(c)) {}      // NOLINT(implicit)
  explicit Expr(const Symbol& s);

  static Expr imaginary_unit();
  static Expr exp(const Expr& arg);
  // Canonicalizes an arbitrary list of monomials.
  static Expr from_terms(std::vector<Monomial> terms);

  const std::vector<Monomial>& terms() const { return *terms_; }
  size_t size() const { return terms_->size(); }
  bool is_zero() const { return terms_->empty(); }
  // No symbols anywhere (exp atoms of constants and the unit i allowed).
  bool is_constant() const;
  std::optional<Rational> rational_value() const;
  // c * i^k * exp(P): invertible inside the kernel.
  bool is_unit() const;
  Expr unit_inverse() const;
  Parity parity() const;
  bool has_odd() const;
  bool has_imaginary() const;

  Expr pow(unsigned n) const;
  std::string str() const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend int compare(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const std::vector<Monomial>> t) : terms_(std::move(t)) {}
  std::shared_ptr<const std::vector<Monomial>> terms_;
};

struct Monomial {
  Rational coeff;
  bool imag = false;
  std::vector<std::pair<Symbol, int>> powers;  // even symbols, ascending
  Expr exp_arg;                                // zero when there is no exp atom
  std::vector<Symbol> odd;                     // odd generators, strictly ascending

  Parity parity() const { return odd.size() % 2 ? Parity::Odd : Parity::Even; }
  bool is_scalar() const { return powers.empty() && exp_arg.is_zero() && odd.empty(); }
};

// Orders monomials by everything except the rational coefficient.
int compare_keys(const Monomial& a, const Monomial& b);
int compare(const Expr& a, const Expr& b);

using Bindings = std::map<Symbol, Expr>;

Expr differentiate(const Expr& e, const Symbol& s, Side side = Side::Left);
Expr substitute(const Expr& e, const Bindings& bindings);

// Every symbol in e, including those inside exp arguments, ascending.
std::vector<Symbol> symbols_of(const Expr& e);
bool contains_symbol(const Expr& e, const Symbol& s);
// Distinct exp(...) atoms, deterministic order.
std::vector<Expr> exp_atoms(const Expr& e);
// Even symbols followed by exp atoms.
std::vector<Expr> harvest_atoms(const Expr& e);

// Splits e by its odd-generator part: key is the ordered generator list, the
// value is the even coefficient in front of it.
std::map<std::vector<Symbol>, Expr> split_odd(const Expr& e);

double eval_numeric(const Expr& e, const std::map<Symbol, double>& point);
std::complex<double> eval_complex(const Expr& e, const std::map<Symbol, double>& point);

}  // namespace ib
