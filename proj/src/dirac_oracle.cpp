#include "ib/dirac_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ib/collocation.hpp"
#include "ib/error.hpp"
#include "ib/mechanics.hpp"

namespace ib {

const char* to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::First: return "first";
    case ConstraintClass::Second: return "second";
    case ConstraintClass::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

void require_even(const SystemSpec& spec) {
  if (spec.has_odd()) throw Error(ErrorKind::InvalidArgument, "the constraint algorithm handles even systems only");
}

// e = c*s + r with c a unit free of the excluded symbols.
std::optional<Expr> solve_for(const Expr& e, const Symbol& s, const std::vector<Symbol>& excluded) {
  if (!contains_symbol(e, s)) return std::nullopt;
  Expr c = differentiate(e, s);
  if (!c.is_unit()) return std::nullopt;
  for (const auto& x : excluded)
    if (contains_symbol(c, x)) return std::nullopt;
  return -(c.unit_inverse() * substitute(e, Bindings{{s, Expr()}}));
}

void bind_into(Bindings& map, const Symbol& s, const Expr& v) {
  Bindings one{{s, v}};
  for (auto& [k, e] : map) e = substitute(e, one);
  map[s] = v;
}

struct VelocityElimination {
  Bindings solved;
  std::vector<Expr> leftover;
};

// Solves the momentum definitions for velocities in declaration order.
VelocityElimination eliminate_velocities(const SystemSpec& spec) {
  const auto mom = momenta(spec);
  std::vector<Symbol> vel;
  for (size_t i = 0; i < spec.size(); ++i) vel.push_back(spec.velocity(i));
  VelocityElimination out;
  std::vector<Expr> rest;
  for (size_t i = 0; i < spec.size(); ++i) {
    Expr e = Expr(spec.momentum(i)) - substitute(mom[i], out.solved);
    std::vector<Symbol> order{vel[i]};
    for (const auto& v : vel)
      if (!(v == vel[i])) order.push_back(v);
    bool done = false;
    for (const auto& v : order)
      if (auto x = solve_for(e, v, vel)) {
        bind_into(out.solved, v, *x);
        done = true;
        break;
      }
    if (!done) rest.push_back(e);
  }
  for (const auto& e : rest) {
    Expr r = substitute(e, out.solved);
    if (r.is_zero()) continue;
    for (const auto& v : vel)
      if (contains_symbol(r, v))
        throw Error(ErrorKind::UnsolvableConstraint, "cannot eliminate velocities from " + r.str() + " = 0");
    out.leftover.push_back(r);
  }
  return out;
}

// Isolates one phase variable: momenta first, then coordinates, each in
// declaration order.
std::optional<std::pair<Symbol, Expr>> isolate_phase(const SystemSpec& spec, const Expr& e) {
  std::vector<Symbol> order;
  for (size_t i = 0; i < spec.size(); ++i) order.push_back(spec.momentum(i));
  for (size_t i = 0; i < spec.size(); ++i) order.push_back(spec.coord(i));
  for (const auto& s : order)
    if (auto v = solve_for(e, s, {s})) return std::make_pair(s, *v);
  return std::nullopt;
}

using ExprMatrix = std::vector<std::vector<Expr>>;

// Gauss-Jordan on the square part of rows with unit pivots. Returns the
// indices of rows whose square part vanished (their tails are the left
// null combinations), or nullopt when a non-unit pivot would be needed.
std::optional<std::vector<size_t>> unit_reduce(ExprMatrix& rows, size_t cols) {
  std::vector<bool> used(rows.size(), false);
  for (size_t c = 0; c < cols; ++c) {
    std::optional<size_t> piv;
    bool nonzero = false;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (used[r] || rows[r][c].is_zero()) continue;
      nonzero = true;
      if (rows[r][c].is_unit() && (!piv || (rows[r][c].is_constant() && !rows[*piv][c].is_constant()))) piv = r;
    }
    if (!piv) {
      if (nonzero) return std::nullopt;
      continue;
    }
    used[*piv] = true;
    Expr inv = rows[*piv][c].unit_inverse();
    for (auto& x : rows[*piv]) x = x * inv;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == *piv || rows[r][c].is_zero()) continue;
      Expr f = rows[r][c];
      for (size_t k = 0; k < rows[r].size(); ++k) rows[r][k] -= f * rows[*piv][k];
    }
  }
  std::vector<size_t> null_rows;
  for (size_t r = 0; r < rows.size(); ++r)
    if (!used[r]) null_rows.push_back(r);
  return null_rows;
}

std::vector<Symbol> phase_and_params(const SystemSpec& spec) {
  auto v = spec.phase_variables();
  for (const auto& p : spec.params) v.push_back(p.symbol);
  return v;
}

}  // namespace

Expr poisson(const SystemSpec& spec, const Expr& f, const Expr& g) {
  Expr out;
  for (size_t i = 0; i < spec.size(); ++i) {
    const Symbol &q = spec.coord(i), &p = spec.momentum(i);
    out += differentiate(f, q) * differentiate(g, p) - differentiate(f, p) * differentiate(g, q);
  }
  return out;
}

Expr canonical_hamiltonian(const SystemSpec& spec) {
  require_even(spec);
  auto elim = eliminate_velocities(spec);
  Expr h = -spec.lagrangian;
  for (size_t i = 0; i < spec.size(); ++i) h += Expr(spec.velocity(i)) * Expr(spec.momentum(i));
  h = substitute(h, elim.solved);
  Bindings zero;
  for (size_t i = 0; i < spec.size(); ++i) zero[spec.velocity(i)] = Expr();
  return substitute(h, zero);
}

std::vector<ConstraintRecord> primary_constraints(const SystemSpec& spec) {
  require_even(spec);
  std::vector<ConstraintRecord> out;
  for (auto& e : eliminate_velocities(spec).leftover) out.push_back({e, 0, ConstraintClass::Undetermined});
  return out;
}

Closure consistency_closure(const SystemSpec& spec, const std::vector<ConstraintRecord>& primaries, int cap) {
  Closure cl;
  cl.hamiltonian = canonical_hamiltonian(spec);
  auto add = [&](const Expr& e, int origin) {
    Expr r = substitute(e, cl.surface);
    if (r.is_zero()) return false;
    if (r.is_constant()) throw Error(ErrorKind::Inconsistent, "constraints force " + r.str() + " = 0");
    auto iso = isolate_phase(spec, r);
    if (!iso) throw Error(ErrorKind::UnsolvableConstraint, "cannot solve constraint " + r.str() + " = 0");
    bind_into(cl.surface, iso->first, iso->second);
    cl.constraints.push_back({origin ? r : e, origin, ConstraintClass::Undetermined});
    return true;
  };
  for (const auto& p : primaries) add(p.expr, 0);
  for (int step = 1;; ++step) {
    const size_t n = cl.constraints.size();
    ExprMatrix rows(n, std::vector<Expr>(n + 1));
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b)
        rows[a][b] = substitute(poisson(spec, cl.constraints[a].expr, cl.constraints[b].expr), cl.surface);
      rows[a][n] = substitute(poisson(spec, cl.constraints[a].expr, cl.hamiltonian), cl.surface);
    }
    auto null_rows = unit_reduce(rows, n);
    if (!null_rows)
      throw Error(ErrorKind::SingularMatrix, "constraint brackets need a non-constant pivot; closure undecidable");
    bool grew = false;
    for (size_t r : *null_rows) grew = add(rows[r][n], step) || grew;
    if (!grew) break;
    cl.steps = step;
    if (step >= cap)
      throw Error(ErrorKind::NonTerminating, "consistency closure did not terminate after " + std::to_string(cap) + " steps");
  }
  return cl;
}

ConstraintInverse classify_and_invert(const SystemSpec& spec, Closure& closure, uint64_t seed) {
  const size_t n = closure.constraints.size();
  ConstraintInverse out;
  out.matrix.assign(n, std::vector<Expr>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      out.matrix[a][b] =
          substitute(poisson(spec, closure.constraints[a].expr, closure.constraints[b].expr), closure.surface);
  if (n == 0) {
    out.inverse = ExprMatrix{};
    return out;
  }
  DiracEvaluator ev(spec, closure);
  std::vector<CompiledExpr> cm;
  for (const auto& row : out.matrix)
    for (const auto& e : row) cm.emplace_back(e, ev.columns());
  std::mt19937_64 rng(seed);
  Eigen::Index rank = 0;
  Eigen::MatrixXd c(n, n);
  for (int attempt = 0; attempt < 2 && rank < static_cast<Eigen::Index>(n); ++attempt) {
    auto x = ev.draw(1, rng);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) c(a, b) = cm[a * n + b].eval(x.data());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
    double top = svd.singularValues()(0);
    rank = (svd.singularValues().array() > 1e-9 * std::max(top, 1.0)).count();
  }
  if (rank < static_cast<Eigen::Index>(n)) {
    // first-class: a constraint whose whole row vanishes on the sample
    std::string names;
    for (size_t a = 0; a < n; ++a) {
      bool first = c.row(a).cwiseAbs().maxCoeff() < 1e-12;
      closure.constraints[a].cls = first ? ConstraintClass::First : ConstraintClass::Undetermined;
      if (first) names += (names.empty() ? "" : ", ") + closure.constraints[a].expr.str();
    }
    throw Error(ErrorKind::GaugeFreedom, "constraint matrix has rank " + std::to_string(rank) + " of " +
                                             std::to_string(n) + "; first-class constraints present" +
                                             (names.empty() ? std::string() : ": " + names) +
                                             "; fix the gauge before computing");
  }
  for (auto& r : closure.constraints) r.cls = ConstraintClass::Second;
  if (n <= 6) {
    ExprMatrix rows(n, std::vector<Expr>(2 * n));
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) rows[a][b] = out.matrix[a][b];
      rows[a][n + a] = Expr(1);
    }
    auto null_rows = unit_reduce(rows, n);
    if (null_rows && null_rows->empty()) {
      ExprMatrix inv(n, std::vector<Expr>(n));
      for (size_t r = 0; r < n; ++r) {
        size_t col = 0;
        while (rows[r][col].is_zero()) ++col;
        for (size_t b = 0; b < n; ++b) inv[col][b] = rows[r][n + b];
      }
      out.inverse = std::move(inv);
    }
  }
  return out;
}

Expr dirac_bracket(const SystemSpec& spec, const Closure& closure, const ConstraintInverse& inv, const Expr& a,
                   const Expr& b) {
  if (!inv.inverse) throw Error(ErrorKind::InvalidArgument, "no symbolic inverse for this constraint matrix");
  const size_t n = closure.constraints.size();
  Expr out = poisson(spec, a, b);
  std::vector<Expr> left(n), right(n);
  for (size_t k = 0; k < n; ++k) {
    left[k] = poisson(spec, a, closure.constraints[k].expr);
    right[k] = poisson(spec, closure.constraints[k].expr, b);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!left[i].is_zero() && !right[j].is_zero()) out -= left[i] * (*inv.inverse)[i][j] * right[j];
  return substitute(out, closure.surface);
}

DiracEvaluator::DiracEvaluator(const SystemSpec& spec, const Closure& closure) {
  require_even(spec);
  const auto phase = spec.phase_variables();
  nphase_ = phase.size();
  columns_ = phase_and_params(spec);
  for (size_t c = 0; c < columns_.size(); ++c) {
    free_.push_back(!closure.surface.count(columns_[c]));
    positive_.push_back(c >= nphase_ && spec.params[c - nphase_].positive);
  }
  for (size_t c = 0; c < nphase_; ++c)
    if (!free_[c]) dependent_.emplace_back(c, CompiledExpr(closure.surface.at(columns_[c]), columns_));
  const size_t n = spec.size();
  canonical_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nphase_), static_cast<Eigen::Index>(nphase_));
  for (size_t i = 0; i < n; ++i) {
    canonical_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n + i)) = 1;
    canonical_(static_cast<Eigen::Index>(n + i), static_cast<Eigen::Index>(i)) = -1;
  }
  const auto& cs = closure.constraints;
  for (const auto& v : phase) {
    m_.emplace_back();
    for (const auto& c : cs) m_.back().emplace_back(poisson(spec, Expr(v), c.expr), columns_);
  }
  for (const auto& a : cs) {
    c_.emplace_back();
    for (const auto& b : cs) c_.back().emplace_back(poisson(spec, a.expr, b.expr), columns_);
  }
}

std::vector<double> DiracEvaluator::draw(size_t count, std::mt19937_64& rng) const {
  SampleSpace space;
  std::vector<size_t> cols;
  for (size_t c = 0; c < columns_.size(); ++c)
    if (free_[c]) {
      cols.push_back(c);
      space.vars.push_back(columns_[c]);
      space.positive.push_back(positive_[c]);
    }
  auto raw = draw_points(space, count, rng);
  const size_t dim = columns_.size();
  std::vector<double> out(count * dim, 0.0);
  for (size_t p = 0; p < count; ++p) {
    double* row = &out[p * dim];
    for (size_t k = 0; k < cols.size(); ++k) row[cols[k]] = raw[p * cols.size() + k];
    for (const auto& [c, e] : dependent_) row[c] = e.eval(row);
  }
  return out;
}

Eigen::MatrixXd DiracEvaluator::at(const double* x, double* condition) const {
  const auto n = static_cast<Eigen::Index>(c_.size());
  const auto np = static_cast<Eigen::Index>(nphase_);
  if (n == 0) {
    if (condition) *condition = 1;
    return canonical_;
  }
  Eigen::MatrixXd c(n, n), m(np, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) c(a, b) = c_[static_cast<size_t>(a)][static_cast<size_t>(b)].eval(x);
  for (Eigen::Index i = 0; i < np; ++i)
    for (Eigen::Index a = 0; a < n; ++a) m(i, a) = m_[static_cast<size_t>(i)][static_cast<size_t>(a)].eval(x);
  if (condition) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
    const auto& s = svd.singularValues();
    *condition = s(n - 1) > 0 ? s(0) / s(n - 1) : INFINITY;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(c);
  return canonical_ + m * lu.solve(m.transpose());
}

namespace {

struct PointDeviation {
  double dev = 0, cond = 0;
  size_t i = 0, j = 0;
};

PointDeviation deviation_at(const std::vector<std::vector<CompiledExpr>>& ci, const DiracEvaluator& ev,
                            const double* x) {
  PointDeviation pd;
  Eigen::MatrixXd d = ev.at(x, &pd.cond);
  for (size_t i = 0; i < ci.size(); ++i)
    for (size_t j = i; j < ci.size(); ++j) {
      double v = std::abs(ci[i][j].eval(x) - d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      if (v > pd.dev) pd = {v, pd.cond, i, j};
    }
  return pd;
}

std::vector<std::vector<CompiledExpr>> compile_table(const BracketTable& table, const DiracEvaluator& ev,
                                                     size_t nphase) {
  std::vector<std::vector<CompiledExpr>> ci(nphase, std::vector<CompiledExpr>(nphase));
  for (size_t i = 0; i < nphase; ++i)
    for (size_t j = i; j < nphase; ++j) ci[i][j] = CompiledExpr(table.get(ev.columns()[i], ev.columns()[j]), ev.columns());
  return ci;
}

OracleComparison combine(const std::vector<PointDeviation>& per, const DiracEvaluator& ev) {
  OracleComparison out;
  out.points = per.size();
  for (const auto& p : per) {
    out.max_condition = std::max(out.max_condition, p.cond);
    if (out.worst_pair.empty() || p.dev > out.deviation) {
      out.deviation = p.dev;
      out.worst_pair = "{" + ev.columns()[p.i].name() + "," + ev.columns()[p.j].name() + "}";
    }
  }
  return out;
}

size_t phase_count(const BracketTable& table) { return table.variables().size(); }

}  // namespace

OracleComparison compare_tables_serial(const BracketTable& table, const DiracEvaluator& ev,
                                       const std::vector<double>& points) {
  const size_t dim = ev.columns().size();
  auto ci = compile_table(table, ev, phase_count(table));
  std::vector<PointDeviation> per(points.size() / dim);
  for (size_t p = 0; p < per.size(); ++p) per[p] = deviation_at(ci, ev, &points[p * dim]);
  return combine(per, ev);
}

OracleComparison compare_tables(const BracketTable& table, const DiracEvaluator& ev, const std::vector<double>& points) {
  const size_t dim = ev.columns().size();
  auto ci = compile_table(table, ev, phase_count(table));
  std::vector<PointDeviation> per(points.size() / dim);
  const long long count = static_cast<long long>(per.size());
#pragma omp parallel for schedule(dynamic)
  for (long long p = 0; p < count; ++p)
    per[static_cast<size_t>(p)] = deviation_at(ci, ev, &points[static_cast<size_t>(p) * dim]);
  return combine(per, ev);
}

OracleComparison compare_tables(const SystemSpec& spec, const BracketTable& table, const Closure& closure,
                                size_t samples, uint64_t seed) {
  DiracEvaluator ev(spec, closure);
  std::mt19937_64 rng(seed);
  auto pts = ev.draw(samples, rng);
  return compare_tables(table, ev, pts);
}

}  // namespace ib
