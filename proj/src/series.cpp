#include "ib/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace ib {

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Rational r(1);
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i, i);
  return r;
}

SeriesPoly::SeriesPoly(std::vector<Expr> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("series needs at least one coefficient");
}

SeriesPoly SeriesPoly::constant(const Expr& c, int order) {
  std::vector<Expr> v(static_cast<size_t>(order + 1));
  v[0] = c;
  return SeriesPoly(std::move(v));
}

SeriesPoly SeriesPoly::truncated(int order) const {
  if (order > this->order()) throw std::out_of_range("cannot extend a truncated series");
  return SeriesPoly(std::vector<Expr>(c_.begin(), c_.begin() + order + 1));
}

SeriesPoly SeriesPoly::derivative() const {
  if (c_.size() < 2) throw std::out_of_range("derivative of an order-0 series");
  return SeriesPoly(std::vector<Expr>(c_.begin() + 1, c_.end()));
}

SeriesPoly SeriesPoly::map(const std::function<Expr(const Expr&)>& f) const {
  std::vector<Expr> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(f(c));
  return SeriesPoly(std::move(v));
}

SeriesPoly operator+(const SeriesPoly& a, const SeriesPoly& b) {
  int k = std::min(a.order(), b.order());
  std::vector<Expr> v(static_cast<size_t>(k + 1));
  for (int n = 0; n <= k; ++n) v[n] = a.c_[n] + b.c_[n];
  return SeriesPoly(std::move(v));
}

SeriesPoly operator-(const SeriesPoly& a, const SeriesPoly& b) {
  int k = std::min(a.order(), b.order());
  std::vector<Expr> v(static_cast<size_t>(k + 1));
  for (int n = 0; n <= k; ++n) v[n] = a.c_[n] - b.c_[n];
  return SeriesPoly(std::move(v));
}

SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b) {
  int k = std::min(a.order(), b.order());
  std::vector<Expr> v(static_cast<size_t>(k + 1));
  for (int n = 0; n <= k; ++n) {
    Expr s;
    for (int j = 0; j <= n; ++j) {
      const Expr& x = a.c_[j];
      const Expr& y = b.c_[n - j];
      if (x.is_zero() || y.is_zero()) continue;
      s += Expr(binomial(n, j)) * x * y;
    }
    v[n] = std::move(s);
  }
  return SeriesPoly(std::move(v));
}

SeriesPoly operator*(const Expr& a, const SeriesPoly& b) {
  std::vector<Expr> v;
  v.reserve(b.c_.size());
  for (const auto& c : b.c_) v.push_back(a * c);
  return SeriesPoly(std::move(v));
}

SeriesPoly series_exp(const SeriesPoly& s) {
  int k = s.order();
  std::vector<Expr> e(static_cast<size_t>(k + 1));
  e[0] = Expr::exp(s.coeff(0));
  for (int n = 1; n <= k; ++n) {
    Expr acc;
    for (int j = 0; j <= n - 1; ++j) {
      const Expr& d = s.coeff(j + 1);
      if (d.is_zero() || e[n - 1 - j].is_zero()) continue;
      acc += Expr(binomial(n - 1, j)) * d * e[n - 1 - j];
    }
    e[n] = std::move(acc);
  }
  return SeriesPoly(std::move(e));
}

namespace {

bool touches(const Monomial& m, const std::map<Symbol, SeriesPoly>& subs) {
  for (const auto& [s, p] : m.powers)
    if (subs.count(s)) return true;
  for (const auto& s : m.odd)
    if (subs.count(s)) return true;
  if (!m.exp_arg.is_zero())
    for (const auto& s : symbols_of(m.exp_arg))
      if (subs.count(s)) return true;
  return false;
}

}  // namespace

SeriesPoly compose(const Expr& e, const std::map<Symbol, SeriesPoly>& subs, int order) {
  std::vector<Monomial> constant_part;
  SeriesPoly acc = SeriesPoly::constant(Expr(), order);
  std::map<std::pair<Symbol, int>, SeriesPoly> powers;
  auto series_of = [&](const Symbol& s) {
    auto it = subs.find(s);
    if (it == subs.end()) return SeriesPoly::constant(Expr(s), order);
    return it->second.truncated(order);
  };
  std::function<const SeriesPoly&(const Symbol&, int)> power_of = [&](const Symbol& s, int p) -> const SeriesPoly& {
    auto key = std::make_pair(s, p);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    SeriesPoly r = p == 1 ? series_of(s) : power_of(s, p - 1) * series_of(s);
    return powers.emplace(key, std::move(r)).first->second;
  };
  for (const auto& m : e.terms()) {
    if (!touches(m, subs)) {
      constant_part.push_back(m);
      continue;
    }
    Monomial head;
    head.coeff = m.coeff;
    head.imag = m.imag;
    SeriesPoly r = SeriesPoly::constant(Expr::from_terms({head}), order);
    for (const auto& [s, p] : m.powers) r = r * power_of(s, p);
    if (!m.exp_arg.is_zero()) r = r * series_exp(compose(m.exp_arg, subs, order));
    for (const auto& s : m.odd) r = r * series_of(s);
    acc = acc + r;
  }
  return acc + SeriesPoly::constant(Expr::from_terms(std::move(constant_part)), order);
}

}  // namespace ib
