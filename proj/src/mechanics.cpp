#include "ib/mechanics.hpp"

#include "ib/error.hpp"
#include "ib/initial_instant.hpp"

namespace ib {

const char* to_string(EquationKind k) {
  switch (k) {
    case EquationKind::Dynamical: return "dynamical";
    case EquationKind::FirstOrder: return "first-order";
    case EquationKind::Algebraic: return "algebraic";
  }
  return "?";
}

std::vector<Expr> momenta(const SystemSpec& spec) {
  std::vector<Expr> p;
  for (size_t i = 0; i < spec.size(); ++i) p.push_back(differentiate(spec.lagrangian, spec.velocity(i), Side::Left));
  return p;
}

Expr total_time_derivative(const SystemSpec& spec, const Expr& f) {
  Expr out;
  for (size_t j = 0; j < spec.size(); ++j) {
    if (contains_symbol(f, spec.accel(j)))
      throw Error(ErrorKind::InvalidArgument, "time derivative of an acceleration is not supported");
    Expr dq = differentiate(f, spec.coord(j), Side::Left);
    if (!dq.is_zero()) out += Expr(spec.velocity(j)) * dq;
    Expr dv = differentiate(f, spec.velocity(j), Side::Left);
    if (!dv.is_zero()) out += Expr(spec.accel(j)) * dv;
  }
  return out;
}

EulerLagrangeSystem euler_lagrange(const SystemSpec& spec) {
  EulerLagrangeSystem sys;
  auto p = momenta(spec);
  for (size_t i = 0; i < spec.size(); ++i) {
    Expr e = total_time_derivative(spec, p[i]) - differentiate(spec.lagrangian, spec.coord(i), Side::Left);
    EquationKind kind = EquationKind::Algebraic;
    for (size_t j = 0; j < spec.size(); ++j) {
      if (contains_symbol(e, spec.accel(j))) {
        kind = EquationKind::Dynamical;
        break;
      }
      if (contains_symbol(e, spec.velocity(j))) kind = EquationKind::FirstOrder;
    }
    sys.equations.push_back({e, kind});
  }
  return sys;
}

Expr energy_function(const SystemSpec& spec) {
  auto p = momenta(spec);
  Expr e = -spec.lagrangian;
  for (size_t i = 0; i < spec.size(); ++i) e += Expr(spec.velocity(i)) * p[i];
  return e;
}

Expr hamiltonian_at_initial(const SystemSpec& spec, const TaylorSolution& tsol, const ICConstraintSet& ics) {
  if (tsol.order < 2) throw Error(ErrorKind::InvalidArgument, "the Hamiltonian needs a Taylor solution of order >= 2");
  Expr energy = energy_function(spec);
  if (energy.parity() != Parity::Even) throw Error(ErrorKind::OddHamiltonian, "the energy function is odd");

  SeriesPoly along = along_solution(spec, tsol, energy, 1);
  Expr drift = ics.reduce(along.coeff(1));
  if (!drift.is_zero())
    throw Error(ErrorKind::NonConservedHamiltonian, "dH/dt at t=0 does not vanish: " + drift.str());
  Expr h = ics.reduce(along.coeff(0));
  if (h.parity() != Parity::Even) throw Error(ErrorKind::OddHamiltonian, "the Hamiltonian is odd");
  return h;
}

}  // namespace ib
