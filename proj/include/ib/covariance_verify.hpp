#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ib/bracket_table.hpp"
#include "ib/compiled.hpp"
#include "ib/sysparse.hpp"
#include "ib/taylor_solution.hpp"

namespace ib {

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double residual = 0;
  bool symbolic = false;  // residual is an exact symbolic zero
  std::string detail;
  std::vector<std::pair<std::string, std::string>> params;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool pass() const;
  const CheckResult* find(const std::string& name) const;
};

// Draws phase-space points that satisfy the initial-condition constraints:
// independent variables and parameters are random, dependent ones follow
// from the elimination map. Columns are phase variables then parameters.
class PhaseSampler {
 public:
  PhaseSampler(const SystemSpec& spec, const ICConstraintSet& ics);

  const std::vector<Symbol>& columns() const { return columns_; }
  std::vector<double> draw(size_t count, std::mt19937_64& rng) const;
  // Completes a point given values for the independent variables (phase
  // names) and parameters, in columns() order.
  void complete(double* row) const;

 private:
  std::vector<Symbol> columns_;
  std::vector<bool> free_, positive_;
  std::vector<std::pair<size_t, CompiledExpr>> dependent_;
};

// G^n f with G f = {f, H}.
Expr liouville_apply(const BracketTable& table, const Expr& hamiltonian, const Expr& f, int n);

// H is in phase variables throughout this module.
CheckResult covariance_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                             const TaylorSolution& tsol, const ICConstraintSet& ics, int order,
                             bool parallel = true);

CheckResult hamilton_equivalence_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                                       const TaylorSolution& tsol, const ICConstraintSet& ics);

// Cyclic sums (-1)^{|a||c|}{a,{b,c}} + cyclic over every variable triple.
std::vector<Expr> jacobi_expressions(const BracketTable& table, bool parallel = true);

// Max |value| of a set of compiled expressions over row-major points.
double max_abs_serial(const std::vector<CompiledExpr>& exprs, const std::vector<double>& points, size_t dim);
double max_abs(const std::vector<CompiledExpr>& exprs, const std::vector<double>& points, size_t dim);

CheckResult jacobi_check(const SystemSpec& spec, const BracketTable& table, const ICConstraintSet& ics,
                         size_t samples, uint64_t seed, double tol = 1e-9);

struct TrajectoryOptions {
  long double t_end = 1;
  long double dt = 1e-3L;
  double tol = 1e-6;
};

struct TrajectoryResult {
  double deviation = 0;     // max over steps and phase variables
  double energy_drift = 0;  // bracket flow
  size_t steps = 0;
};

// RK4 for d xi/dt = {xi, H} against RK4 for the Euler-Lagrange equations
// raised to second order. `point` holds independent IC values in
// ics.independent order followed by parameter values.
TrajectoryResult trajectory_compare(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                                    const TaylorSolution& tsol, const ICConstraintSet& ics,
                                    const std::vector<long double>& point, const TrajectoryOptions& opts);

CheckResult trajectory_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                             const TaylorSolution& tsol, const ICConstraintSet& ics,
                             const std::optional<std::vector<long double>>& point, uint64_t seed,
                             const TrajectoryOptions& opts);

}  // namespace ib
