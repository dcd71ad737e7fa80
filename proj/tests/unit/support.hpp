#pragma once

#include <string>

#include "ib/pipeline.hpp"
#include "ib/raw_expr.hpp"

namespace ib::test {

inline std::string data(const std::string& file) { return std::string(IB_DATA_DIR) + "/" + file; }

inline SystemSpec toy() { return load_system(data("toy.lag")); }
inline SystemSpec oscillator() { return load_system(data("oscillator.lag")); }

inline const Derivation& toy_derivation() {
  static const Derivation d = derive(toy());
  return d;
}

// Parses an expression over every name the system exposes.
inline Expr ex(const SystemSpec& spec, const std::string& text) {
  auto names = spec.output_names();
  for (const auto& [k, v] : spec.lagrangian_names()) names.emplace(k, v);
  return parse_expression(text, names);
}

inline Symbol sym(const SystemSpec& spec, const std::string& name) {
  return symbols_of(ex(spec, name)).front();
}

}  // namespace ib::test
