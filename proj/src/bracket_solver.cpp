#include "ib/bracket_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ib/error.hpp"

namespace ib {

namespace {

// a + b i over the rationals.
struct QI {
  Rational re, im;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  QI operator*(const QI& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  QI operator-(const QI& o) const { return {re - o.re, im - o.im}; }
  QI inverse() const {
    Rational n = re * re + im * im;
    return {re / n, -im / n};
  }
};

std::optional<QI> as_qi(const Expr& e) {
  QI out;
  for (const auto& m : e.terms()) {
    if (!m.is_scalar()) return std::nullopt;
    (m.imag ? out.im : out.re) += m.coeff;
  }
  return out;
}

Expr from_qi(const QI& q) { return Expr(q.re) + Expr(q.im) * Expr::imaginary_unit(); }

Expr snap_complex(std::complex<double> c, double tol, std::vector<std::string>& warnings, const std::string& where) {
  auto part = [&](double v) {
    Rational r;
    if (snap_rational(v, 64, tol, r)) return r;
    warnings.push_back("coefficient " + std::to_string(v) + " of " + where + " is not a small rational; kept as approximation");
    constexpr int64_t scale = int64_t(1) << 30;
    return Rational(std::llround(v * double(scale)), scale);
  };
  return Expr(part(c.real())) + Expr(part(c.imag())) * Expr::imaginary_unit();
}

std::vector<Symbol> even_sample_vars(const IdentificationSystem& sys, std::vector<bool>* positive = nullptr) {
  std::vector<Symbol> v;
  for (const auto& s : sys.independent)
    if (!s.odd()) {
      v.push_back(s);
      if (positive) positive->push_back(false);
    }
  for (const auto& p : sys.params) {
    v.push_back(p.symbol);
    if (positive) positive->push_back(p.positive);
  }
  return v;
}

std::string witness_slots(const IdentificationSystem& sys, const Eigen::VectorXcd& w, size_t nb) {
  std::ostringstream os;
  double top = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  bool first = true;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) < 1e-3 * top) continue;
    size_t s = static_cast<size_t>(i) / nb;
    std::string name = sys.slot_name(s);
    if (os.str().find(name) != std::string::npos) continue;
    os << (first ? "" : ", ") << name;
    first = false;
  }
  return os.str();
}

// Snaps coefficients, assembles B per slot and checks the system symbolically.
void finish(const IdentificationSystem& sys, const std::vector<ScalarEquation>& eqs, double tol, SolveResult& res) {
  const size_t nb = res.basis.size();
  res.values.assign(sys.slots.size(), Expr());
  for (size_t s = 0; s < sys.slots.size(); ++s)
    for (size_t b = 0; b < nb; ++b) {
      auto c = res.coeffs[s * nb + b];
      if (std::abs(c) <= tol) continue;
      res.values[s] += snap_complex(c, tol, res.warnings, sys.slot_name(s)) * res.basis[b];
    }
  for (size_t e = 0; e < eqs.size(); ++e) {
    Expr r = eqs[e].lhs;
    for (const auto& [s, c] : eqs[e].terms) r -= res.values[s] * c;
    if (!r.is_zero()) {
      res.warnings.push_back("snapped brackets leave a symbolic residual in equation " + std::to_string(e) + ": " +
                             r.str());
      break;
    }
  }
}

SolveResult collocate(const IdentificationSystem& sys, const std::vector<ScalarEquation>& eqs,
                      const SolveOptions& opts) {
  SampleSpace space;
  space.vars = even_sample_vars(sys, &space.positive);
  CollocationOptions co{opts.samples, opts.seed, opts.tol};
  double last_residual = 0;
  std::vector<Expr> previous;
  for (int d = 0; d <= std::max(opts.degree, 0); ++d) {
    auto basis = harvest_basis(sys, d);
    if (basis == previous) continue;
    previous = basis;
    auto cr = collocation_solve(eqs, sys.slots.size(), basis, space, co);
    last_residual = cr.residual;
    if (!(cr.residual <= opts.tol)) continue;
    if (cr.nullspace_dim > 0)
      throw Error(ErrorKind::NonUniqueBrackets,
                  "identification leaves a " + std::to_string(cr.nullspace_dim) +
                      "-dimensional family of brackets (basis degree " + std::to_string(d) +
                      "); free direction involves " + witness_slots(sys, cr.witness, basis.size()));
    SolveResult res;
    res.basis = basis;
    res.coeffs.assign(cr.coeffs.data(), cr.coeffs.data() + cr.coeffs.size());
    res.residual = cr.residual;
    res.degree = d;
    finish(sys, eqs, opts.tol, res);
    return res;
  }
  std::ostringstream os;
  os << "no basis up to degree " << opts.degree << " fits the identification equations (validation residual "
     << last_residual << ")";
  throw Error(ErrorKind::BasisInsufficient, os.str());
}

// Exact sparse elimination over Q(i); one unknown per slot.
SolveResult solve_exact(const IdentificationSystem& sys, const std::vector<ScalarEquation>& eqs) {
  const size_t n = sys.slots.size();
  struct Row {
    std::map<size_t, QI> a;
    QI b;
  };
  std::vector<Row> pivots;
  std::map<size_t, size_t> pivot_of;  // column -> pivot row
  for (const auto& e : eqs) {
    Row r;
    r.b = *as_qi(e.lhs);
    for (const auto& [s, c] : e.terms) {
      QI v = *as_qi(c);
      QI& slot = r.a[s];
      slot = QI{slot.re + v.re, slot.im + v.im};
      if (slot.is_zero()) r.a.erase(s);
    }
    // reduce against existing pivots
    for (bool changed = true; changed;) {
      changed = false;
      for (auto it = r.a.begin(); it != r.a.end(); ++it) {
        auto p = pivot_of.find(it->first);
        if (p == pivot_of.end()) continue;
        QI f = it->second;
        const Row& pr = pivots[p->second];
        for (const auto& [c, v] : pr.a) {
          QI& t = r.a[c];
          t = t - f * v;
          if (t.is_zero()) r.a.erase(c);
        }
        r.b = r.b - f * pr.b;
        changed = true;
        break;
      }
    }
    if (r.a.empty()) {
      if (!r.b.is_zero())
        throw Error(ErrorKind::BasisInsufficient, "graded identification equations are inconsistent over constant brackets");
      continue;
    }
    size_t col = r.a.begin()->first;
    QI inv = r.a.begin()->second.inverse();
    for (auto& [c, v] : r.a) v = v * inv;
    r.b = r.b * inv;
    pivot_of[col] = pivots.size();
    pivots.push_back(std::move(r));
  }
  if (pivots.size() < n) {
    std::ostringstream os;
    bool first = true;
    for (size_t s = 0; s < n && os.tellp() < 200; ++s)
      if (!pivot_of.count(s)) {
        os << (first ? "" : ", ") << sys.slot_name(s);
        first = false;
      }
    throw Error(ErrorKind::NonUniqueBrackets, "identification leaves a " + std::to_string(n - pivots.size()) +
                                                   "-dimensional family of brackets; free direction involves " + os.str());
  }
  std::vector<QI> x(n);
  for (size_t i = pivots.size(); i-- > 0;) {
    const Row& r = pivots[i];
    size_t col = r.a.begin()->first;
    QI v = r.b;
    for (const auto& [c, a] : r.a)
      if (c != col) v = v - a * x[c];
    x[col] = v;
  }
  SolveResult res;
  res.basis = {Expr(1)};
  res.exact = true;
  for (size_t s = 0; s < n; ++s) {
    res.coeffs.emplace_back(x[s].re.to_double(), x[s].im.to_double());
    res.values.push_back(from_qi(x[s]));
  }
  return res;
}

}  // namespace

std::string IdentificationSystem::slot_name(size_t s) const {
  const auto& sl = slots.at(s);
  return "{" + independent[sl.k].name() + "," + independent[sl.l].name() + "}";
}

IdentificationSystem build_identification_system(const SystemSpec& spec, const TaylorSolution& tsol,
                                                 const ICConstraintSet& ics, const Expr& hamiltonian) {
  if (tsol.order < 1) throw Error(ErrorKind::InvalidArgument, "identification needs a Taylor solution of order >= 1");
  IdentificationSystem sys;
  sys.independent = ics.independent;
  sys.params = spec.params;
  const size_t m = sys.independent.size();
  std::map<std::pair<size_t, size_t>, size_t> slot_of;
  for (size_t k = 0; k < m; ++k) {
    if (sys.independent[k].odd()) sys.graded = true;
    for (size_t l = k; l < m; ++l) {
      if (sys.independent[k].parity() != sys.independent[l].parity()) continue;
      if (k == l && !sys.independent[k].odd()) continue;
      slot_of[{k, l}] = sys.slots.size();
      sys.slots.push_back({k, l});
    }
  }
  std::vector<Expr> dh(m);
  for (size_t l = 0; l < m; ++l) dh[l] = differentiate(hamiltonian, sys.independent[l], Side::Left);

  for (size_t i = 0; i < 2 * spec.size(); ++i) {
    const bool is_coord = i < spec.size();
    const size_t c = is_coord ? i : i - spec.size();
    Expr xi0 = ics.reduce(is_coord ? Expr(spec.initial_coord(c)) : tsol.momenta.at(c).coeff(0));
    Expr rate = ics.reduce(is_coord ? tsol.coords.at(c).coeff(1) : tsol.momenta.at(c).coeff(1));
    std::map<size_t, Expr> acc;
    for (size_t k = 0; k < m; ++k) {
      Expr d = differentiate(xi0, sys.independent[k], Side::Right);
      if (d.is_zero()) continue;
      for (size_t l = 0; l < m; ++l) {
        if (dh[l].is_zero()) continue;
        auto it = slot_of.find({std::min(k, l), std::max(k, l)});
        if (it == slot_of.end()) continue;
        Expr t = d * dh[l];
        if (k > l && swap_sign(sys.independent[l], sys.independent[k]) < 0) t = -t;
        acc[it->second] += t;
      }
    }
    ScalarEquation eq;
    eq.lhs = rate;
    for (auto& [s, e] : acc)
      if (!e.is_zero()) eq.terms.emplace_back(s, e);
    sys.variables.push_back(is_coord ? spec.coord(c) : spec.momentum(c));
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

std::vector<Expr> harvest_basis(const IdentificationSystem& sys, int degree) {
  std::vector<Symbol> vars = even_sample_vars(sys);
  std::vector<Expr> monomials{Expr(1)};
  std::vector<std::pair<Expr, size_t>> frontier{{Expr(1), 0}};
  for (int d = 1; d <= degree; ++d) {
    std::vector<std::pair<Expr, size_t>> next;
    for (const auto& [mono, start] : frontier)
      for (size_t v = start; v < vars.size(); ++v) {
        Expr e = mono * Expr(vars[v]);
        monomials.push_back(e);
        next.emplace_back(e, v);
      }
    frontier = std::move(next);
  }
  std::set<Expr> atom_set;
  for (const auto& eq : sys.equations) {
    for (auto& a : exp_atoms(eq.lhs)) atom_set.insert(a);
    for (const auto& [s, c] : eq.terms)
      for (auto& a : exp_atoms(c)) atom_set.insert(a);
  }
  std::vector<Expr> basis;
  std::set<Expr> seen;
  auto add = [&](const Expr& e) {
    if (seen.insert(e).second) basis.push_back(e);
  };
  for (const auto& mono : monomials) add(mono);
  for (const auto& atom : atom_set)
    for (const auto& mono : monomials) add(mono * atom);
  return basis;
}

SolveResult solve_even(const IdentificationSystem& sys, const SolveOptions& opts) {
  return collocate(sys, sys.equations, opts);
}

SolveResult graded_match(const IdentificationSystem& sys, const SolveOptions& opts) {
  std::vector<ScalarEquation> split;
  bool constant = true;
  for (const auto& eq : sys.equations) {
    std::map<std::vector<Symbol>, ScalarEquation> by_key;
    for (auto& [key, c] : split_odd(eq.lhs)) by_key[key].lhs = c;
    for (const auto& [s, coeff] : eq.terms)
      for (auto& [key, c] : split_odd(coeff)) by_key[key].terms.emplace_back(s, c);
    for (auto& [key, se] : by_key) {
      if (!as_qi(se.lhs)) constant = false;
      for (const auto& [s, c] : se.terms)
        if (!as_qi(c)) constant = false;
      split.push_back(std::move(se));
    }
  }
  if (constant && even_sample_vars(sys).empty()) {
    SolveResult res = solve_exact(sys, split);
    return res;
  }
  return collocate(sys, split, opts);
}

SolveResult solve_identification(const IdentificationSystem& sys, const SolveOptions& opts) {
  return sys.graded ? graded_match(sys, opts) : solve_even(sys, opts);
}

BracketTable reconstruct_brackets(const SystemSpec& spec, const IdentificationSystem& sys, const SolveResult& res) {
  const Bindings rename = spec.ic_to_phase();
  auto phase_of = [&](const Symbol& ic) { return symbols_of(rename.at(ic)).front(); };
  BracketTable table(spec.name, spec.phase_variables(), spec.param_symbols());
  for (const auto& c : sys.independent) table.independent.push_back(phase_of(c));
  for (size_t s = 0; s < sys.slots.size(); ++s) {
    const auto& sl = sys.slots[s];
    table.set(phase_of(sys.independent[sl.k]), phase_of(sys.independent[sl.l]), substitute(res.values[s], rename),
              Provenance::Solved);
  }
  const size_t m = sys.independent.size();
  for (size_t k = 0; k < m; ++k)
    for (size_t l = k + 1; l < m; ++l)
      if (sys.independent[k].parity() != sys.independent[l].parity())
        table.set(phase_of(sys.independent[k]), phase_of(sys.independent[l]), Expr(), Provenance::ZeroByParity);
  table.warnings = res.warnings;
  return table;
}

BracketTable extend_table(const SystemSpec& spec, const BracketTable& solved, const ICConstraintSet& ics) {
  const Bindings rename = spec.ic_to_phase();
  const Bindings to_ic = spec.phase_to_ic();
  BracketTable out = solved;
  const auto vars = spec.phase_variables();
  std::vector<Expr> image;
  std::vector<bool> independent;
  for (const auto& v : vars) {
    const Symbol ic = symbols_of(to_ic.at(v)).front();
    auto it = ics.elimination.find(ic);
    independent.push_back(it == ics.elimination.end());
    image.push_back(it == ics.elimination.end() ? Expr(v) : substitute(it->second, rename));
  }
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i; j < vars.size(); ++j) {
      if (i == j && !vars[i].odd()) continue;
      if (independent[i] && independent[j]) {
        if (!out.provenance(vars[i], vars[j])) out.set(vars[i], vars[j], Expr(), Provenance::Solved);
        continue;
      }
      Expr v = bracket_of(image[i], image[j], solved);
      Provenance p = v.is_zero() && vars[i].parity() != vars[j].parity() ? Provenance::ZeroByParity
                                                                          : Provenance::Extended;
      out.set(vars[i], vars[j], v, p);
    }
  return out;
}

}  // namespace ib
