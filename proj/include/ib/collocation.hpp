#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ib/compiled.hpp"
#include "ib/expr.hpp"

namespace ib {

// lhs == sum_s B_s * coefficient, one unknown function B_s per slot.
struct ScalarEquation {
  Expr lhs;
  std::vector<std::pair<size_t, Expr>> terms;
};

struct SampleSpace {
  std::vector<Symbol> vars;
  std::vector<bool> positive;
};

// Row-major points; each component from [-2,-0.5] u [0.5,2], or [0.5,2] for
// positive variables.
std::vector<double> draw_points(const SampleSpace& space, size_t count, std::mt19937_64& rng);

// Compiled form of the collocation system. Unknown (slot s, basis b) sits in
// column s * basis_size + b; row (point p, equation e) is p * equations + e.
class CollocationProblem {
 public:
  CollocationProblem(const std::vector<ScalarEquation>& eqs, size_t slots, const std::vector<Expr>& basis,
                     const std::vector<Symbol>& vars);

  size_t equations() const { return lhs_.size(); }
  size_t columns() const { return slots_ * basis_.size(); }
  size_t dimension() const { return dim_; }

  void assemble_serial(const std::vector<double>& points, Eigen::MatrixXcd& a, Eigen::VectorXcd& b) const;
  void assemble(const std::vector<double>& points, Eigen::MatrixXcd& a, Eigen::VectorXcd& b) const;

 private:
  void fill_point(const double* x, Eigen::Index row0, Eigen::MatrixXcd& a, Eigen::VectorXcd& b) const;

  size_t slots_;
  size_t dim_;
  std::vector<CompiledExpr> lhs_;
  std::vector<std::vector<std::pair<size_t, CompiledExpr>>> terms_;
  std::vector<CompiledExpr> basis_;
};

struct CollocationOptions {
  size_t samples = 200;
  uint64_t seed = 42;
  double tol = 1e-9;
};

struct CollocationResult {
  Eigen::VectorXcd coeffs;
  double residual = 0;
  size_t nullspace_dim = 0;
  // Unit vector spanning part of the nullspace (empty when unique).
  Eigen::VectorXcd witness;
};

CollocationResult collocation_solve(const std::vector<ScalarEquation>& eqs, size_t slots,
                                    const std::vector<Expr>& basis, const SampleSpace& space,
                                    const CollocationOptions& opts);

}  // namespace ib
