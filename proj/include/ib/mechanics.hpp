#pragma once

#include <vector>

#include "ib/sysparse.hpp"
#include "ib/taylor_solution.hpp"

namespace ib {

enum class EquationKind { Dynamical, FirstOrder, Algebraic };
const char* to_string(EquationKind k);

struct ELEquation {
  Expr expr;  // E_i = 0
  EquationKind kind;
};

struct EulerLagrangeSystem {
  std::vector<ELEquation> equations;
};

// p_i = left d L / d dq_i.
std::vector<Expr> momenta(const SystemSpec& spec);

// E_i = d/dt(dL/d dq_i) - dL/dq_i with left derivatives throughout.
EulerLagrangeSystem euler_lagrange(const SystemSpec& spec);

// Chain-rule time derivative of an expression in coordinates and velocities.
Expr total_time_derivative(const SystemSpec& spec, const Expr& f);

// Energy function sum_i dq_i p_i - L in coordinates and velocities.
Expr energy_function(const SystemSpec& spec);

// The energy function evaluated on the Taylor solution at t=0 and reduced to
// the independent initial conditions.
Expr hamiltonian_at_initial(const SystemSpec& spec, const TaylorSolution& tsol, const ICConstraintSet& ics);

}  // namespace ib
