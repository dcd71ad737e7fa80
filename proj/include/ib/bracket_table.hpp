#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ib/expr.hpp"

namespace ib {

enum class Provenance { Solved, Extended, ZeroByParity };
const char* to_string(Provenance p);

// Graded-antisymmetric bracket table over a fixed list of variables. Only one
// orientation of each pair is stored; the other follows from
// {b,a} = -(-1)^{|a||b|} {a,b}.
class BracketTable {
 public:
  struct Entry {
    Symbol a, b;
    Expr value;
    Provenance provenance;
  };

  BracketTable() = default;
  BracketTable(std::string system, std::vector<Symbol> variables, std::vector<Symbol> constants = {});

  const std::string& system() const { return system_; }
  const std::vector<Symbol>& variables() const { return variables_; }
  const std::vector<Symbol>& constants() const { return constants_; }
  bool has(const Symbol& s) const { return index_.count(s) > 0; }
  bool is_constant(const Symbol& s) const;

  Expr get(const Symbol& a, const Symbol& b) const;
  std::optional<Provenance> provenance(const Symbol& a, const Symbol& b) const;
  void set(const Symbol& a, const Symbol& b, const Expr& value, Provenance p);

  // Stored entries in variable order (a before b in the variable list).
  std::vector<Entry> entries() const;

  // Independent variables the solved entries are expressed in.
  std::vector<Symbol> independent;
  std::vector<std::string> warnings;

 private:
  size_t index(const Symbol& s) const;

  std::string system_;
  std::vector<Symbol> variables_;
  std::vector<Symbol> constants_;
  std::unordered_map<Symbol, size_t> index_;
  std::map<std::pair<size_t, size_t>, Entry> entries_;
};

// Graded antisymmetry sign: {b,a} = sign * {a,b}.
int swap_sign(const Symbol& a, const Symbol& b);

// sum_{a,b} (f d^R/d a) T_ab (d^L/d b g) over the table variables.
Expr bracket_of(const Expr& f, const Expr& g, const BracketTable& table);

}  // namespace ib
