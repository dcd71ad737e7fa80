#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ib/collocation.hpp"
#include "ib/covariance_verify.hpp"
#include "ib/error.hpp"
#include "ib/mechanics.hpp"

namespace ib {

namespace {

using State = std::vector<long double>;
using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

template <class F>
void rk4_step(State& y, long double dt, const F& f) {
  const size_t n = y.size();
  State k1 = f(y), tmp(n);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt / 2 * k1[i];
  State k2 = f(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt / 2 * k2[i];
  State k3 = f(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  State k4 = f(tmp);
  for (size_t i = 0; i < n; ++i) y[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  for (long double v : y)
    if (!std::isfinite(v)) throw Error(ErrorKind::StepRejected, "integration produced a non-finite value");
}

std::vector<CompiledExpr> compile_all(const std::vector<Expr>& es, const std::vector<Symbol>& vars) {
  std::vector<CompiledExpr> out;
  for (const auto& e : es) out.emplace_back(e, vars);
  return out;
}

}  // namespace

TrajectoryResult trajectory_compare(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                                    const TaylorSolution& tsol, const ICConstraintSet& ics,
                                    const std::vector<long double>& point, const TrajectoryOptions& opts) {
  if (spec.has_odd()) throw Error(ErrorKind::InvalidArgument, "trajectory comparison needs an even system");
  const size_t n = spec.size();
  const size_t m = ics.independent.size();
  const size_t np = spec.params.size();
  if (point.size() != m + np)
    throw Error(ErrorKind::InvalidArgument, "trajectory point needs " + std::to_string(m + np) + " values");
  const Bindings rename = spec.ic_to_phase();
  const auto params = spec.param_symbols();

  // Bracket flow over the independent phase variables.
  std::vector<Symbol> flow_vars;
  for (const auto& c : ics.independent) flow_vars.push_back(symbols_of(rename.at(c)).front());
  flow_vars.insert(flow_vars.end(), params.begin(), params.end());
  std::vector<Expr> rhs;
  for (size_t k = 0; k < m; ++k) rhs.push_back(bracket_of(Expr(flow_vars[k]), hamiltonian, table));
  auto flow_rhs = compile_all(rhs, flow_vars);
  std::vector<Expr> phase_exprs;  // every phase variable as a function of the flow state
  for (size_t i = 0; i < n; ++i) phase_exprs.push_back(substitute(ics.reduce(Expr(spec.initial_coord(i))), rename));
  for (size_t i = 0; i < n; ++i) phase_exprs.push_back(substitute(ics.reduce(Expr(spec.initial_momentum(i))), rename));
  auto flow_phase = compile_all(phase_exprs, flow_vars);
  CompiledExpr flow_h(hamiltonian, flow_vars);

  // Euler-Lagrange system raised to second order in every coordinate.
  std::vector<Symbol> el_vars;
  for (size_t i = 0; i < n; ++i) el_vars.push_back(spec.coord(i));
  for (size_t i = 0; i < n; ++i) el_vars.push_back(spec.velocity(i));
  el_vars.insert(el_vars.end(), params.begin(), params.end());
  Bindings no_accel;
  for (size_t i = 0; i < n; ++i) no_accel[spec.accel(i)] = Expr();
  std::vector<CompiledExpr> el_r;
  std::vector<std::vector<CompiledExpr>> el_w(n);
  for (const auto& eq : euler_lagrange(spec).equations) {
    Expr e = eq.expr;
    if (eq.kind != EquationKind::Dynamical) e = total_time_derivative(spec, e);
    if (eq.kind == EquationKind::Algebraic) e = total_time_derivative(spec, e);
    const size_t row = el_r.size();
    el_r.emplace_back(substitute(e, no_accel), el_vars);
    for (size_t j = 0; j < n; ++j) el_w[row].emplace_back(differentiate(e, spec.accel(j)), el_vars);
  }
  auto el_mom = compile_all(momenta(spec), el_vars);

  // Initial data from the Taylor solution at the given point.
  std::vector<Symbol> ic_vars = ics.independent;
  ic_vars.insert(ic_vars.end(), params.begin(), params.end());
  std::vector<Expr> start;
  for (size_t i = 0; i < n; ++i) start.push_back(ics.reduce(tsol.coords.at(i).coeff(0)));
  for (size_t i = 0; i < n; ++i) start.push_back(ics.reduce(tsol.coords.at(i).coeff(1)));
  auto start_c = compile_all(start, ic_vars);

  State flow(point.begin(), point.begin() + static_cast<long>(m));
  State el(2 * n);
  for (size_t i = 0; i < 2 * n; ++i) el[i] = start_c[i].eval(point.data());
  const State pvals(point.begin() + static_cast<long>(m), point.end());

  auto flow_f = [&](const State& y) {
    State x(y);
    x.insert(x.end(), pvals.begin(), pvals.end());
    State d(m);
    for (size_t k = 0; k < m; ++k) d[k] = flow_rhs[k].eval(x.data());
    return d;
  };
  auto el_f = [&](const State& y) {
    State x(y);
    x.insert(x.end(), pvals.begin(), pvals.end());
    MatrixL w(n, n);
    VectorL r(n);
    for (size_t i = 0; i < n; ++i) {
      r(i) = -el_r[i].eval(x.data());
      for (size_t j = 0; j < n; ++j) w(i, j) = el_w[i][j].eval(x.data());
    }
    VectorL acc = w.partialPivLu().solve(r);
    State d(2 * n);
    for (size_t i = 0; i < n; ++i) {
      d[i] = y[n + i];
      d[n + i] = acc(i);
    }
    return d;
  };
  auto deviation = [&]() {
    State fx(flow);
    fx.insert(fx.end(), pvals.begin(), pvals.end());
    State ex(el);
    ex.insert(ex.end(), pvals.begin(), pvals.end());
    long double worst = 0;
    for (size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(flow_phase[i].eval(fx.data()) - el[i]));
      worst = std::max(worst, std::abs(flow_phase[n + i].eval(fx.data()) - el_mom[i].eval(ex.data())));
    }
    return worst;
  };
  auto energy = [&]() {
    State fx(flow);
    fx.insert(fx.end(), pvals.begin(), pvals.end());
    return flow_h.eval(fx.data());
  };

  TrajectoryResult res;
  res.steps = static_cast<size_t>(std::llround(opts.t_end / opts.dt));
  const long double h0 = energy();
  long double worst = deviation(), drift = 0;
  for (size_t s = 0; s < res.steps; ++s) {
    rk4_step(flow, opts.dt, flow_f);
    rk4_step(el, opts.dt, el_f);
    worst = std::max(worst, deviation());
    drift = std::max(drift, std::abs(energy() - h0));
  }
  res.deviation = static_cast<double>(worst);
  res.energy_drift = static_cast<double>(drift);
  return res;
}

CheckResult trajectory_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                             const TaylorSolution& tsol, const ICConstraintSet& ics,
                             const std::optional<std::vector<long double>>& point, uint64_t seed,
                             const TrajectoryOptions& opts) {
  CheckResult res;
  res.name = "trajectory";
  std::ostringstream dt;
  dt << static_cast<double>(opts.dt);
  res.params = {{"t_end", std::to_string(static_cast<double>(opts.t_end))}, {"dt", dt.str()}};
  if (spec.has_odd()) {
    res.status = CheckStatus::Skipped;
    res.detail = "graded system";
    return res;
  }
  std::vector<long double> x;
  if (point) {
    x = *point;
  } else {
    SampleSpace space;
    space.vars = ics.independent;
    space.positive.assign(space.vars.size(), false);
    for (const auto& p : spec.params) {
      space.vars.push_back(p.symbol);
      space.positive.push_back(p.positive);
    }
    std::mt19937_64 rng(seed);
    for (double v : draw_points(space, 1, rng)) x.push_back(v);
    res.params.emplace_back("seed", std::to_string(seed));
  }
  auto tr = trajectory_compare(spec, table, hamiltonian, tsol, ics, x, opts);
  res.residual = tr.deviation;
  std::ostringstream os;
  os << "max deviation " << tr.deviation << ", energy drift " << tr.energy_drift;
  res.detail = os.str();
  if (!(tr.deviation <= opts.tol)) res.status = CheckStatus::Fail;
  return res;
}

}  // namespace ib
