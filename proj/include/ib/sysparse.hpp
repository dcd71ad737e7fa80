#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ib/expr.hpp"

namespace ib {

// Symbol families. The kind is folded into the symbol rank so that every
// family sorts in declaration order and families never interleave.
enum class SymbolKind { Param = 0, Coord, Velocity, Accel, Momentum, InitialCoord, InitialMomentum, Unknown };

int64_t symbol_rank(SymbolKind kind, size_t index, int sub = 0);
SymbolKind kind_of(const Symbol& s);
size_t index_of_rank(const Symbol& s);

struct Param {
  Symbol symbol;
  bool positive = false;
};

class SystemSpec {
 public:
  SystemSpec() = default;
  // Builds every derived symbol; throws DuplicateCoord on any name clash.
  SystemSpec(std::string name, std::vector<Param> params, std::vector<std::pair<std::string, Parity>> coords);

  std::string name;
  std::vector<Param> params;
  Expr lagrangian;
  std::vector<std::pair<std::string, std::string>> metadata;

  size_t size() const { return coords_.size(); }
  const std::vector<Symbol>& coords() const { return coords_; }
  const Symbol& coord(size_t i) const { return coords_.at(i); }
  const Symbol& velocity(size_t i) const { return velocities_.at(i); }
  const Symbol& accel(size_t i) const { return accels_.at(i); }
  const Symbol& momentum(size_t i) const { return momenta_.at(i); }
  const Symbol& initial_coord(size_t i) const { return initial_coords_.at(i); }
  const Symbol& initial_momentum(size_t i) const { return initial_momenta_.at(i); }
  // Coefficient slot n of coordinate i inside the Taylor solver.
  Symbol unknown(size_t i, int n) const;

  // Phase variables: coordinates in declaration order, then momenta.
  std::vector<Symbol> phase_variables() const;
  // Initial-condition symbols in the same order as phase_variables().
  std::vector<Symbol> initial_symbols() const;
  // ic symbol -> phase variable (X0 -> x) and back.
  Bindings ic_to_phase() const;
  Bindings phase_to_ic() const;
  std::vector<Symbol> param_symbols() const;
  bool has_odd() const;

  // Names visible in a Lagrangian.
  std::map<std::string, Symbol> lagrangian_names() const;
  // Names visible in derived output (phase variables, ICs, params).
  std::map<std::string, Symbol> output_names() const;

  friend bool operator==(const SystemSpec& a, const SystemSpec& b);

 private:
  std::vector<Symbol> coords_, velocities_, accels_, momenta_, initial_coords_, initial_momenta_;
};

// Initial-condition name for a variable name: x -> x0, f1_0 -> f1_0_0.
std::string initial_name(const std::string& name);

SystemSpec parse_system(std::string_view text);
std::string emit_system(const SystemSpec& spec);
SystemSpec load_system(const std::string& path);

}  // namespace ib
