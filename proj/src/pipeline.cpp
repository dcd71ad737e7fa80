#include "ib/pipeline.hpp"

#include <algorithm>

#include "ib/error.hpp"
#include "ib/mechanics.hpp"

namespace ib {

Derivation derive(const SystemSpec& spec, const DeriveOptions& opts) {
  Derivation d;
  d.spec = spec;
  d.tsol = taylor_solve(spec, opts.order);
  d.ics = detect_ic_constraints(spec, d.tsol);
  d.hamiltonian = hamiltonian_at_initial(spec, d.tsol, d.ics);
  d.hamiltonian_phase = substitute(d.hamiltonian, spec.ic_to_phase());
  d.system = build_identification_system(spec, d.tsol, d.ics, d.hamiltonian);
  d.solution = solve_identification(d.system, opts.solve);
  d.table = extend_table(spec, reconstruct_brackets(spec, d.system, d.solution), d.ics);
  d.table.warnings.insert(d.table.warnings.begin(), d.ics.warnings.begin(), d.ics.warnings.end());
  return d;
}

VerificationReport verify(const Derivation& d, const VerifyOptions& opts) {
  for (const auto& c : opts.checks)
    if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end())
      throw Error(ErrorKind::InvalidArgument, "unknown check '" + c + "'");
  auto enabled = [&](const std::string& name) {
    return std::find(opts.checks.begin(), opts.checks.end(), name) != opts.checks.end();
  };
  VerificationReport rep;
  if (enabled("jacobi")) rep.checks.push_back(jacobi_check(d.spec, d.table, d.ics, opts.samples, opts.seed, opts.tol));
  if (enabled("covariance"))
    rep.checks.push_back(
        covariance_check(d.spec, d.table, d.hamiltonian_phase, d.tsol, d.ics, d.tsol.order, opts.parallel));
  if (enabled("hamilton-equivalence"))
    rep.checks.push_back(hamilton_equivalence_check(d.spec, d.table, d.hamiltonian_phase, d.tsol, d.ics));
  if (enabled("trajectory"))
    rep.checks.push_back(
        trajectory_check(d.spec, d.table, d.hamiltonian_phase, d.tsol, d.ics, opts.point, opts.seed, opts.trajectory));
  return rep;
}

void inject_corruption(const SystemSpec& spec, BracketTable& table) {
  if (spec.size() == 0) return;
  const Symbol& q = spec.coord(0);
  if (q.odd()) throw Error(ErrorKind::InvalidArgument, "corruption hook needs an even first coordinate");
  table.set(q, spec.momentum(0), Expr(q), Provenance::Solved);
}

}  // namespace ib
