#include "ib/expr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ib/error.hpp"

namespace ib {

namespace {

using Terms = std::vector<Monomial>;

const std::shared_ptr<const Terms>& zero_terms() {
  static const auto z = std::make_shared<const Terms>();
  return z;
}

int cmp_symbols(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    auto c = a[i] <=> b[i];
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int cmp_powers(const std::vector<std::pair<Symbol, int>>& a, const std::vector<std::pair<Symbol, int>>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    auto c = a[i].first <=> b[i].first;
    if (c != 0) return c < 0 ? -1 : 1;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Product of two monomials; returns false when an odd generator repeats.
bool mul_monomials(const Monomial& a, const Monomial& b, Monomial& out) {
  out.odd.clear();
  out.odd.reserve(a.odd.size() + b.odd.size());
  int sign = 1;
  size_t i = 0, j = 0;
  while (i < a.odd.size() && j < b.odd.size()) {
    auto c = a.odd[i] <=> b.odd[j];
    if (c == 0) return false;
    if (c < 0) {
      out.odd.push_back(a.odd[i++]);
    } else {
      // b's generator passes over the remaining a.odd.size() - i generators
      if ((a.odd.size() - i) % 2) sign = -sign;
      out.odd.push_back(b.odd[j++]);
    }
  }
  while (i < a.odd.size()) out.odd.push_back(a.odd[i++]);
  while (j < b.odd.size()) out.odd.push_back(b.odd[j++]);

  out.coeff = a.coeff * b.coeff;
  if (sign < 0) out.coeff = -out.coeff;
  out.imag = a.imag != b.imag;
  if (a.imag && b.imag) out.coeff = -out.coeff;

  out.powers.clear();
  out.powers.reserve(a.powers.size() + b.powers.size());
  i = j = 0;
  while (i < a.powers.size() && j < b.powers.size()) {
    auto c = a.powers[i].first <=> b.powers[j].first;
    if (c < 0) {
      out.powers.push_back(a.powers[i++]);
    } else if (c > 0) {
      out.powers.push_back(b.powers[j++]);
    } else {
      out.powers.emplace_back(a.powers[i].first, a.powers[i].second + b.powers[j].second);
      ++i;
      ++j;
    }
  }
  while (i < a.powers.size()) out.powers.push_back(a.powers[i++]);
  while (j < b.powers.size()) out.powers.push_back(b.powers[j++]);

  if (a.exp_arg.is_zero()) {
    out.exp_arg = b.exp_arg;
  } else if (b.exp_arg.is_zero()) {
    out.exp_arg = a.exp_arg;
  } else {
    out.exp_arg = a.exp_arg + b.exp_arg;
  }
  return true;
}

void collect_symbols(const Expr& e, std::set<Symbol>& out) {
  for (const auto& m : e.terms()) {
    for (const auto& [s, p] : m.powers) out.insert(s);
    for (const auto& s : m.odd) out.insert(s);
    if (!m.exp_arg.is_zero()) collect_symbols(m.exp_arg, out);
  }
}

bool has_bound_symbol(const Expr& e, const Bindings& b) {
  for (const auto& m : e.terms()) {
    for (const auto& [s, p] : m.powers)
      if (b.count(s)) return true;
    for (const auto& s : m.odd)
      if (b.count(s)) return true;
    if (!m.exp_arg.is_zero() && has_bound_symbol(m.exp_arg, b)) return true;
  }
  return false;
}

void print_rational_abs(std::ostringstream& os, const Rational& r) {
  os << (r.num() < 0 ? -r.num() : r.num());
}

template <class Num>
Num eval_impl(const Expr& e, const std::map<Symbol, double>& point) {
  Num total = 0;
  for (const auto& m : e.terms()) {
    if (!m.odd.empty()) throw Error(ErrorKind::OddEvaluation, "numeric evaluation of an odd generator");
    Num v = m.coeff.to_double();
    if (m.imag) {
      if constexpr (std::is_same_v<Num, double>) {
        throw Error(ErrorKind::InvalidArgument, "real evaluation of an expression containing im");
      } else {
        v *= Num(0.0, 1.0);
      }
    }
    for (const auto& [s, p] : m.powers) {
      auto it = point.find(s);
      if (it == point.end()) throw Error(ErrorKind::UnboundSymbol, "unbound symbol '" + s.name() + "'");
      v *= std::pow(it->second, p);
    }
    if (!m.exp_arg.is_zero()) v *= std::exp(eval_impl<Num>(m.exp_arg, point));
    total += v;
  }
  return total;
}

}  // namespace

Expr::Expr() : terms_(zero_terms()) {}

Expr::Expr(const Rational& c) : terms_(zero_terms()) {
  if (!c.is_zero()) {
    Monomial m;
    m.coeff = c;
    terms_ = std::make_shared<const Terms>(Terms{std::move(m)});
  }
}

Expr::Expr(const Symbol& s) {
  Monomial m;
  m.coeff = 1;
  if (s.odd())
    m.odd.push_back(s);
  else
    m.powers.emplace_back(s, 1);
  terms_ = std::make_shared<const Terms>(Terms{std::move(m)});
}

Expr Expr::imaginary_unit() {
  Monomial m;
  m.coeff = 1;
  m.imag = true;
  return Expr(std::make_shared<const Terms>(Terms{std::move(m)}));
}

int compare_keys(const Monomial& a, const Monomial& b) {
  if (int c = cmp_symbols(a.odd, b.odd)) return c;
  if (int c = cmp_powers(a.powers, b.powers)) return c;
  if (int c = compare(a.exp_arg, b.exp_arg)) return c;
  if (a.imag != b.imag) return a.imag ? 1 : -1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.terms_ == b.terms_) return 0;
  const auto& x = a.terms();
  const auto& y = b.terms();
  size_t n = std::min(x.size(), y.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = compare_keys(x[i], y[i])) return c;
    auto c = x[i].coeff <=> y[i].coeff;
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

Expr Expr::from_terms(std::vector<Monomial> terms) {
  terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Monomial& m) { return m.coeff.is_zero(); }),
              terms.end());
  if (terms.empty()) return Expr();
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) { return compare_keys(a, b) < 0; });
  Terms out;
  out.reserve(terms.size());
  for (auto& m : terms) {
    if (!out.empty() && compare_keys(out.back(), m) == 0) {
      out.back().coeff += m.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else {
      out.push_back(std::move(m));
    }
  }
  if (out.empty()) return Expr();
  Parity p = out.front().parity();
  for (const auto& m : out)
    if (m.parity() != p) throw Error(ErrorKind::ParityViolation, "sum of terms with different parity");
  return Expr(std::make_shared<const Terms>(std::move(out)));
}

bool Expr::is_constant() const {
  for (const auto& m : terms()) {
    if (!m.powers.empty() || !m.odd.empty()) return false;
    if (!m.exp_arg.is_zero() && !m.exp_arg.is_constant()) return false;
  }
  return true;
}

std::optional<Rational> Expr::rational_value() const {
  if (is_zero()) return Rational(0);
  if (size() != 1) return std::nullopt;
  const auto& m = terms().front();
  if (!m.is_scalar() || m.imag) return std::nullopt;
  return m.coeff;
}

bool Expr::is_unit() const {
  if (size() != 1) return false;
  const auto& m = terms().front();
  return m.powers.empty() && m.odd.empty();
}

Expr Expr::unit_inverse() const {
  if (!is_unit()) throw Error(ErrorKind::InvalidArgument, "expression is not invertible: " + str());
  const auto& m = terms().front();
  Monomial r;
  r.coeff = m.coeff.inverse();
  r.imag = m.imag;
  if (m.imag) r.coeff = -r.coeff;  // 1/i = -i
  r.exp_arg = -m.exp_arg;
  return from_terms({std::move(r)});
}

Parity Expr::parity() const { return is_zero() ? Parity::Even : terms().front().parity(); }

bool Expr::has_odd() const {
  for (const auto& m : terms())
    if (!m.odd.empty()) return true;
  return false;
}

bool Expr::has_imaginary() const {
  for (const auto& m : terms()) {
    if (m.imag) return true;
    if (!m.exp_arg.is_zero() && m.exp_arg.has_imaginary()) return true;
  }
  return false;
}

Expr Expr::operator-() const {
  if (is_zero()) return *this;
  Terms t = terms();
  for (auto& m : t) m.coeff = -m.coeff;
  return Expr(std::make_shared<const Terms>(std::move(t)));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.parity() != b.parity()) throw Error(ErrorKind::ParityViolation, "sum of terms with different parity");
  const auto& x = a.terms();
  const auto& y = b.terms();
  Terms out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = compare_keys(x[i], y[j]);
    if (c < 0) {
      out.push_back(x[i++]);
    } else if (c > 0) {
      out.push_back(y[j++]);
    } else {
      Rational s = x[i].coeff + y[j].coeff;
      if (!s.is_zero()) {
        out.push_back(x[i]);
        out.back().coeff = s;
      }
      ++i;
      ++j;
    }
  }
  while (i < x.size()) out.push_back(x[i++]);
  while (j < y.size()) out.push_back(y[j++]);
  if (out.empty()) return Expr();
  return Expr(std::make_shared<const Terms>(std::move(out)));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (auto r = a.rational_value(); r && r->is_one()) return b;
  if (auto r = b.rational_value(); r && r->is_one()) return a;
  Terms out;
  out.reserve(a.size() * b.size());
  Monomial m;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms())
      if (mul_monomials(x, y, m)) out.push_back(m);
  return Expr::from_terms(std::move(out));
}

Expr Expr::pow(unsigned n) const {
  Expr result(1);
  Expr base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Expr Expr::exp(const Expr& arg) {
  if (arg.parity() != Parity::Even) throw Error(ErrorKind::ParityViolation, "exp of an odd expression");
  Terms body, nil;
  for (const auto& m : arg.terms()) (m.odd.empty() ? body : nil).push_back(m);
  Expr atom(1);
  if (!body.empty()) {
    Monomial m;
    m.coeff = 1;
    m.exp_arg = from_terms(std::move(body));
    atom = from_terms({std::move(m)});
  }
  if (nil.empty()) return atom;
  // the odd-containing part is nilpotent, so its series terminates
  Expr n = from_terms(std::move(nil));
  Expr sum(1), term(1);
  for (int k = 1;; ++k) {
    term = term * n * Expr(Rational(1, k));
    if (term.is_zero()) break;
    sum += term;
  }
  return atom * sum;
}

std::string Expr::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : terms()) {
    bool neg = m.coeff.sign() < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    if (m.imag) factors.emplace_back("im");
    for (const auto& [s, p] : m.powers) factors.push_back(p == 1 ? s.name() : s.name() + "^" + std::to_string(p));
    if (!m.exp_arg.is_zero()) factors.push_back("exp(" + m.exp_arg.str() + ")");
    for (const auto& s : m.odd) factors.push_back(s.name());
    int64_t num = m.coeff.num() < 0 ? -m.coeff.num() : m.coeff.num();
    bool wrote = false;
    if (num != 1 || factors.empty()) {
      print_rational_abs(os, m.coeff);
      wrote = true;
    }
    for (const auto& f : factors) {
      if (wrote) os << "*";
      os << f;
      wrote = true;
    }
    if (m.coeff.den() != 1) os << "/" << m.coeff.den();
  }
  return os.str();
}

Expr differentiate(const Expr& e, const Symbol& s, Side side) {
  Terms out;
  Expr extra;
  for (const auto& m : e.terms()) {
    if (s.odd()) {
      auto it = std::find(m.odd.begin(), m.odd.end(), s);
      if (it == m.odd.end()) continue;
      size_t k = static_cast<size_t>(it - m.odd.begin());
      size_t passes = side == Side::Left ? k : m.odd.size() - 1 - k;
      Monomial d = m;
      d.odd.erase(d.odd.begin() + static_cast<std::ptrdiff_t>(k));
      if (passes % 2) d.coeff = -d.coeff;
      out.push_back(std::move(d));
      continue;
    }
    for (size_t i = 0; i < m.powers.size(); ++i) {
      if (!(m.powers[i].first == s)) continue;
      Monomial d = m;
      d.coeff *= Rational(m.powers[i].second);
      if (--d.powers[i].second == 0) d.powers.erase(d.powers.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(d));
      break;
    }
    if (!m.exp_arg.is_zero()) {
      Expr da = differentiate(m.exp_arg, s, side);
      if (!da.is_zero()) extra += Expr::from_terms({m}) * da;
    }
  }
  return Expr::from_terms(std::move(out)) + extra;
}

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty() || e.is_zero()) return e;
  for (const auto& [s, v] : bindings)
    if (s.odd() && !v.is_zero() && v.parity() != Parity::Odd)
      throw Error(ErrorKind::ParityViolation, "odd symbol '" + s.name() + "' bound to an even expression");
    else if (!s.odd() && v.parity() != Parity::Even)
      throw Error(ErrorKind::ParityViolation, "even symbol '" + s.name() + "' bound to an odd expression");

  Terms untouched;
  Expr acc;
  for (const auto& m : e.terms()) {
    Expr probe = Expr::from_terms({m});
    if (!has_bound_symbol(probe, bindings)) {
      untouched.push_back(m);
      continue;
    }
    Monomial head;
    head.coeff = m.coeff;
    head.imag = m.imag;
    Expr r = Expr::from_terms({head});
    for (const auto& [s, p] : m.powers) {
      auto it = bindings.find(s);
      Expr f = it == bindings.end() ? Expr(s) : it->second;
      r = r * f.pow(static_cast<unsigned>(p));
    }
    if (!m.exp_arg.is_zero()) r = r * Expr::exp(substitute(m.exp_arg, bindings));
    for (const auto& s : m.odd) {
      auto it = bindings.find(s);
      r = r * (it == bindings.end() ? Expr(s) : it->second);
    }
    acc += r;
  }
  return Expr::from_terms(std::move(untouched)) + acc;
}

std::vector<Symbol> symbols_of(const Expr& e) {
  std::set<Symbol> s;
  collect_symbols(e, s);
  return {s.begin(), s.end()};
}

bool contains_symbol(const Expr& e, const Symbol& s) {
  for (const auto& m : e.terms()) {
    for (const auto& [t, p] : m.powers)
      if (t == s) return true;
    for (const auto& t : m.odd)
      if (t == s) return true;
    if (!m.exp_arg.is_zero() && contains_symbol(m.exp_arg, s)) return true;
  }
  return false;
}

std::vector<Expr> exp_atoms(const Expr& e) {
  std::set<Expr> atoms;
  for (const auto& m : e.terms()) {
    if (m.exp_arg.is_zero()) continue;
    atoms.insert(Expr::exp(m.exp_arg));
    for (const auto& inner : exp_atoms(m.exp_arg)) atoms.insert(inner);
  }
  return {atoms.begin(), atoms.end()};
}

std::vector<Expr> harvest_atoms(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& s : symbols_of(e))
    if (!s.odd()) out.emplace_back(s);
  for (auto& a : exp_atoms(e)) out.push_back(std::move(a));
  return out;
}

std::map<std::vector<Symbol>, Expr> split_odd(const Expr& e) {
  std::map<std::vector<Symbol>, Terms> groups;
  for (const auto& m : e.terms()) {
    Monomial c = m;
    c.odd.clear();
    groups[m.odd].push_back(std::move(c));
  }
  std::map<std::vector<Symbol>, Expr> out;
  for (auto& [k, t] : groups) out.emplace(k, Expr::from_terms(std::move(t)));
  return out;
}

double eval_numeric(const Expr& e, const std::map<Symbol, double>& point) { return eval_impl<double>(e, point); }

std::complex<double> eval_complex(const Expr& e, const std::map<Symbol, double>& point) {
  return eval_impl<std::complex<double>>(e, point);
}

}  // namespace ib
