#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ib/bracket_table.hpp"
#include "ib/collocation.hpp"
#include "ib/initial_instant.hpp"
#include "ib/sysparse.hpp"

namespace ib {

// Unknown bracket {C_k, C_l}, k <= l; k == l only for odd C_k.
struct Slot {
  size_t k, l;
};

struct IdentificationSystem {
  std::vector<Symbol> independent;  // initial-condition symbols C
  std::vector<Param> params;
  std::vector<Slot> slots;
  std::vector<Symbol> variables;          // phase variable of each equation
  std::vector<ScalarEquation> equations;  // order-1 coefficient == sum_s B_s R_s
  bool graded = false;

  std::string slot_name(size_t s) const;
};

IdentificationSystem build_identification_system(const SystemSpec& spec, const TaylorSolution& tsol,
                                                 const ICConstraintSet& ics, const Expr& hamiltonian);

// {1}, monomials of degree <= d in the even independent ICs and parameters,
// and those monomials times every exp atom of the system.
std::vector<Expr> harvest_basis(const IdentificationSystem& sys, int degree);

struct SolveOptions {
  int degree = 2;
  size_t samples = 200;
  uint64_t seed = 42;
  double tol = 1e-9;
};

struct SolveResult {
  std::vector<Expr> basis;
  std::vector<std::complex<double>> coeffs;  // slot-major, basis-minor
  std::vector<Expr> values;                  // B per slot, in IC symbols
  double residual = 0;
  size_t nullspace_dim = 0;
  int degree = 0;
  bool exact = false;
  std::vector<std::string> warnings;
};

// Degree-escalating collocation for even systems; accepts the first basis
// degree whose validation residual is within tol.
SolveResult solve_even(const IdentificationSystem& sys, const SolveOptions& opts);

// Matches odd-monomial coefficients; exact over Q(i) when the basis is {1}.
SolveResult graded_match(const IdentificationSystem& sys, const SolveOptions& opts);

SolveResult solve_identification(const IdentificationSystem& sys, const SolveOptions& opts);

// Solved table over all phase variables, entries for independent pairs only.
BracketTable reconstruct_brackets(const SystemSpec& spec, const IdentificationSystem& sys, const SolveResult& res);

// Closes the table over every phase variable via the elimination map.
BracketTable extend_table(const SystemSpec& spec, const BracketTable& solved, const ICConstraintSet& ics);

}  // namespace ib
