#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ib/bracket_solver.hpp"
#include "ib/covariance_verify.hpp"
#include "ib/initial_instant.hpp"

namespace ib {

struct DeriveOptions {
  int order = 3;
  SolveOptions solve;
};

struct Derivation {
  SystemSpec spec;
  TaylorSolution tsol;
  ICConstraintSet ics;
  Expr hamiltonian;        // in independent ICs
  Expr hamiltonian_phase;  // same, in phase variables
  IdentificationSystem system;
  SolveResult solution;
  BracketTable table;      // extended over every phase variable
};

Derivation derive(const SystemSpec& spec, const DeriveOptions& opts = {});

inline const std::vector<std::string> kAllChecks = {"jacobi", "covariance", "hamilton-equivalence", "trajectory"};

struct VerifyOptions {
  std::vector<std::string> checks = kAllChecks;
  size_t samples = 100;
  uint64_t seed = 42;
  double tol = 1e-9;
  TrajectoryOptions trajectory;
  std::optional<std::vector<long double>> point;
  bool parallel = true;
};

VerificationReport verify(const Derivation& d, const VerifyOptions& opts);

// Test hook: replaces the first coordinate/momentum bracket with the
// coordinate itself.
void inject_corruption(const SystemSpec& spec, BracketTable& table);

}  // namespace ib
