#pragma once

#include <string>

#include "ib/bracket_table.hpp"
#include "ib/sysparse.hpp"

namespace ib {

enum class LatticeModel { SelfDual, Dirac };
const char* to_string(LatticeModel m);
LatticeModel parse_model(const std::string& name);

// Periodic lattice: N x N sites for the self-dual model, N sites for Dirac.
struct LatticeConfig {
  LatticeModel model = LatticeModel::SelfDual;
  int n = 2;
  Rational a{1};
  Rational m{1};

  void validate() const;
};

// Coordinates f1_i_j, f2_i_j site by site, then every f0_i_j.
SystemSpec gen_sd(const LatticeConfig& cfg);
// Coordinates psi<c>_<n> for every site, then the conjugates psic<c>_<n>.
SystemSpec gen_dirac(const LatticeConfig& cfg);
SystemSpec generate(const LatticeConfig& cfg);

// Closed-form brackets among the field coordinates of the generated spec.
BracketTable expected_table(const LatticeConfig& cfg, const SystemSpec& spec);

}  // namespace ib
