#include "ib/bracket_table.hpp"

#include <algorithm>

#include "ib/error.hpp"

namespace ib {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Solved: return "solved";
    case Provenance::Extended: return "extended";
    case Provenance::ZeroByParity: return "zero-by-parity";
  }
  return "?";
}

int swap_sign(const Symbol& a, const Symbol& b) { return a.odd() && b.odd() ? 1 : -1; }

BracketTable::BracketTable(std::string system, std::vector<Symbol> variables, std::vector<Symbol> constants)
    : system_(std::move(system)), variables_(std::move(variables)), constants_(std::move(constants)) {
  for (size_t i = 0; i < variables_.size(); ++i) index_.emplace(variables_[i], i);
}

bool BracketTable::is_constant(const Symbol& s) const {
  return std::find(constants_.begin(), constants_.end(), s) != constants_.end();
}

size_t BracketTable::index(const Symbol& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw Error(ErrorKind::UnboundSymbol, "'" + s.name() + "' is not a table variable");
  return it->second;
}

Expr BracketTable::get(const Symbol& a, const Symbol& b) const {
  size_t i = index(a), j = index(b);
  if (i <= j) {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Expr() : it->second.value;
  }
  auto it = entries_.find({j, i});
  if (it == entries_.end()) return Expr();
  return swap_sign(a, b) > 0 ? it->second.value : -it->second.value;
}

std::optional<Provenance> BracketTable::provenance(const Symbol& a, const Symbol& b) const {
  size_t i = index(a), j = index(b);
  auto it = entries_.find({std::min(i, j), std::max(i, j)});
  if (it == entries_.end()) return std::nullopt;
  return it->second.provenance;
}

void BracketTable::set(const Symbol& a, const Symbol& b, const Expr& value, Provenance p) {
  if (!value.is_zero() && value.parity() != a.parity() + b.parity())
    throw Error(ErrorKind::ParityViolation, "bracket {" + a.name() + "," + b.name() + "} has the wrong parity");
  size_t i = index(a), j = index(b);
  if (i == j && !a.odd()) {
    if (!value.is_zero()) throw Error(ErrorKind::ParityViolation, "even self-bracket must vanish");
    return;
  }
  if (i <= j) {
    entries_[{i, j}] = Entry{a, b, value, p};
  } else {
    entries_[{j, i}] = Entry{b, a, swap_sign(a, b) > 0 ? value : -value, p};
  }
}

std::vector<BracketTable::Entry> BracketTable::entries() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_) out.push_back(e);
  return out;
}

Expr bracket_of(const Expr& f, const Expr& g, const BracketTable& table) {
  std::vector<std::pair<Symbol, Expr>> df, dg;
  for (const auto& s : symbols_of(f)) {
    if (table.is_constant(s)) continue;
    if (!table.has(s)) throw Error(ErrorKind::UnboundSymbol, "'" + s.name() + "' is not a table variable");
    df.emplace_back(s, differentiate(f, s, Side::Right));
  }
  for (const auto& s : symbols_of(g)) {
    if (table.is_constant(s)) continue;
    if (!table.has(s)) throw Error(ErrorKind::UnboundSymbol, "'" + s.name() + "' is not a table variable");
    dg.emplace_back(s, differentiate(g, s, Side::Left));
  }
  Expr out;
  for (const auto& [a, fa] : df) {
    if (fa.is_zero()) continue;
    for (const auto& [b, gb] : dg) {
      if (gb.is_zero()) continue;
      Expr t = table.get(a, b);
      if (t.is_zero()) continue;
      out += fa * t * gb;
    }
  }
  return out;
}

}  // namespace ib
