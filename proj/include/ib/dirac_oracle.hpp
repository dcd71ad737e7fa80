#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ib/bracket_table.hpp"
#include "ib/compiled.hpp"
#include "ib/sysparse.hpp"

namespace ib {

enum class ConstraintClass { First, Second, Undetermined };
const char* to_string(ConstraintClass c);

struct ConstraintRecord {
  Expr expr;      // over coordinates and momenta
  int origin = 0; // 0 primary, n for the n-th consistency step
  ConstraintClass cls = ConstraintClass::Undetermined;
};

// Canonical Poisson bracket on (q, p).
Expr poisson(const SystemSpec& spec, const Expr& f, const Expr& g);

// Canonical Hamiltonian with solvable velocities eliminated and the rest
// (which enter L linearly) dropped.
Expr canonical_hamiltonian(const SystemSpec& spec);

std::vector<ConstraintRecord> primary_constraints(const SystemSpec& spec);

struct Closure {
  std::vector<ConstraintRecord> constraints;
  Expr hamiltonian;
  int steps = 0;
  // phase variable -> expression on the constraint surface
  Bindings surface;
};

Closure consistency_closure(const SystemSpec& spec, const std::vector<ConstraintRecord>& primaries, int cap = 10);

struct ConstraintInverse {
  std::vector<std::vector<Expr>> matrix;   // C_ab = {phi_a, phi_b}
  std::optional<std::vector<std::vector<Expr>>> inverse;  // when small enough
};

// Classifies every constraint (throws GaugeFreedom on first-class ones) and
// inverts C symbolically when it is at most 6x6.
ConstraintInverse classify_and_invert(const SystemSpec& spec, Closure& closure, uint64_t seed = 42);

// {A,B} - {A,phi_a} Cinv_ab {phi_b,B}; needs a symbolic inverse.
Expr dirac_bracket(const SystemSpec& spec, const Closure& closure, const ConstraintInverse& inv, const Expr& a,
                   const Expr& b);

// Numeric Dirac brackets among all phase variables at sampled points.
class DiracEvaluator {
 public:
  DiracEvaluator(const SystemSpec& spec, const Closure& closure);

  // Columns of a point: phase variables, then parameters.
  const std::vector<Symbol>& columns() const { return columns_; }
  std::vector<double> draw(size_t count, std::mt19937_64& rng) const;

  // Phase-variable bracket matrix at one point; also returns cond(C).
  Eigen::MatrixXd at(const double* x, double* condition = nullptr) const;

 private:
  size_t nphase_;
  std::vector<Symbol> columns_;
  std::vector<bool> free_, positive_;
  std::vector<std::pair<size_t, CompiledExpr>> dependent_;
  Eigen::MatrixXd canonical_;
  std::vector<std::vector<CompiledExpr>> m_;  // {xi_I, phi_a}
  std::vector<std::vector<CompiledExpr>> c_;  // {phi_a, phi_b}
};

struct OracleComparison {
  double deviation = 0;
  double max_condition = 0;
  size_t points = 0;
  std::string worst_pair;
};

OracleComparison compare_tables_serial(const BracketTable& table, const DiracEvaluator& ev,
                                       const std::vector<double>& points);
OracleComparison compare_tables(const BracketTable& table, const DiracEvaluator& ev, const std::vector<double>& points);
OracleComparison compare_tables(const SystemSpec& spec, const BracketTable& table, const Closure& closure,
                                size_t samples, uint64_t seed);

}  // namespace ib
