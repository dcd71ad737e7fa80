#include "ib/covariance_verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "ib/collocation.hpp"
#include "ib/error.hpp"
#include "ib/series.hpp"

namespace ib {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

bool VerificationReport::pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

Symbol ic_of(const SystemSpec& spec, const Symbol& phase) { return symbols_of(spec.phase_to_ic().at(phase)).front(); }

// Value of every phase variable at t=0, reduced to independent ICs.
Bindings phase_at_zero(const SystemSpec& spec, const TaylorSolution& tsol, const ICConstraintSet& ics) {
  Bindings out;
  for (size_t i = 0; i < spec.size(); ++i) {
    out[spec.coord(i)] = ics.reduce(tsol.coords.at(i).coeff(0));
    out[spec.momentum(i)] = ics.reduce(tsol.momenta.at(i).coeff(0));
  }
  return out;
}

std::string pair_name(const Symbol& a, const Symbol& b) { return "{" + a.name() + "," + b.name() + "}"; }

}  // namespace

PhaseSampler::PhaseSampler(const SystemSpec& spec, const ICConstraintSet& ics) {
  const Bindings rename = spec.ic_to_phase();
  for (const auto& v : spec.phase_variables()) {
    columns_.push_back(v);
    free_.push_back(!ics.elimination.count(ic_of(spec, v)));
    positive_.push_back(false);
  }
  for (const auto& p : spec.params) {
    columns_.push_back(p.symbol);
    free_.push_back(true);
    positive_.push_back(p.positive);
  }
  for (size_t c = 0; c < columns_.size(); ++c)
    if (!free_[c])
      dependent_.emplace_back(c, CompiledExpr(substitute(ics.elimination.at(ic_of(spec, columns_[c])), rename), columns_));
}

void PhaseSampler::complete(double* row) const {
  for (const auto& [c, e] : dependent_) row[c] = 0;
  for (const auto& [c, e] : dependent_) row[c] = e.eval(row);
}

std::vector<double> PhaseSampler::draw(size_t count, std::mt19937_64& rng) const {
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
    for (size_t k = 0; k < cols.size(); ++k) out[p * dim + cols[k]] = raw[p * cols.size() + k];
    complete(&out[p * dim]);
  }
  return out;
}

Expr liouville_apply(const BracketTable& table, const Expr& hamiltonian, const Expr& f, int n) {
  Expr out = f;
  for (int k = 0; k < n; ++k) out = bracket_of(out, hamiltonian, table);
  return out;
}

CheckResult covariance_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                             const TaylorSolution& tsol, const ICConstraintSet& ics, int order, bool parallel) {
  CheckResult res;
  res.name = "covariance";
  res.params = {{"order", std::to_string(order)}};
  if (tsol.order < order)
    throw Error(ErrorKind::InvalidArgument, "covariance check needs a Taylor solution of order " + std::to_string(order));
  const int top = order - 2;
  const auto vars = spec.phase_variables();
  const size_t n = vars.size();
  const Bindings zero = phase_at_zero(spec, tsol, ics);

  std::map<Symbol, SeriesPoly> series;
  for (size_t i = 0; i < spec.size(); ++i) {
    auto red = [&](const Expr& e) { return ics.reduce(e); };
    series.emplace(spec.coord(i), tsol.coords.at(i).map(red).truncated(top));
    series.emplace(spec.momentum(i), tsol.momenta.at(i).map(red).truncated(top));
  }

  // tower[v][s] = G^s v
  std::vector<std::vector<Expr>> tower(n);
  for (size_t v = 0; v < n; ++v) {
    tower[v].push_back(Expr(vars[v]));
    for (int s = 1; s <= top; ++s) tower[v].push_back(bracket_of(tower[v].back(), hamiltonian, table));
  }

  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      if (i != j || vars[i].odd()) pairs.emplace_back(i, j);

  std::vector<std::string> failure(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  auto run = [&](size_t p) {
    try {
      const auto [i, j] = pairs[p];
      SeriesPoly right = compose(table.get(vars[i], vars[j]), series, top);
      for (int k = 0; k <= top; ++k) {
        Expr left;
        for (int s = 0; s <= k; ++s) left += Expr(binomial(k, s)) * bracket_of(tower[i][s], tower[j][k - s], table);
        Expr diff = ics.reduce(substitute(left, zero)) - ics.reduce(right.coeff(k));
        if (!diff.is_zero()) {
          failure[p] = pair_name(vars[i], vars[j]) + " at order " + std::to_string(k) + ": " + diff.str();
          return;
        }
      }
    } catch (...) {
      errors[p] = std::current_exception();
    }
  };
  const long long count = static_cast<long long>(pairs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long p = 0; p < count; ++p) run(static_cast<size_t>(p));
  } else {
    for (long long p = 0; p < count; ++p) run(static_cast<size_t>(p));
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  size_t failed = 0;
  for (const auto& f : failure)
    if (!f.empty()) {
      if (!failed) res.detail = f;
      ++failed;
    }
  res.symbolic = failed == 0;
  res.status = failed ? CheckStatus::Fail : CheckStatus::Pass;
  res.residual = failed ? static_cast<double>(failed) : 0.0;
  res.params.emplace_back("pairs", std::to_string(pairs.size()));
  if (failed) res.detail = std::to_string(failed) + " pair(s) violate covariance; first " + res.detail;
  return res;
}

CheckResult hamilton_equivalence_check(const SystemSpec& spec, const BracketTable& table, const Expr& hamiltonian,
                                       const TaylorSolution& tsol, const ICConstraintSet& ics) {
  CheckResult res;
  res.name = "hamilton-equivalence";
  const Bindings rename = spec.ic_to_phase();
  size_t failed = 0;
  for (size_t i = 0; i < 2 * spec.size(); ++i) {
    const bool is_coord = i < spec.size();
    const size_t c = is_coord ? i : i - spec.size();
    const Symbol v = is_coord ? spec.coord(c) : spec.momentum(c);
    const SeriesPoly& s = is_coord ? tsol.coords.at(c) : tsol.momenta.at(c);
    Expr expected = substitute(ics.reduce(s.coeff(1)), rename);
    Expr got = bracket_of(Expr(v), hamiltonian, table);
    if (!(got == expected)) {
      if (!failed)
        res.detail = "d" + v.name() + "/dt: bracket flow gives " + got.str() + ", equations of motion give " +
                     expected.str();
      ++failed;
    }
  }
  res.symbolic = failed == 0;
  res.status = failed ? CheckStatus::Fail : CheckStatus::Pass;
  res.residual = static_cast<double>(failed);
  return res;
}

std::vector<Expr> jacobi_expressions(const BracketTable& table, bool parallel) {
  const auto& vars = table.variables();
  const size_t n = vars.size();
  auto sgn = [](const Symbol& a, const Symbol& b) { return a.odd() && b.odd() ? -1 : 1; };
  std::vector<std::tuple<size_t, size_t, size_t>> triples;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b)
      for (size_t c = b; c < n; ++c) triples.emplace_back(a, b, c);
  std::vector<Expr> out(triples.size());
  std::vector<std::exception_ptr> errors(triples.size());
  auto run = [&](size_t t) {
    try {
      const auto [ia, ib, ic] = triples[t];
      const Symbol &a = vars[ia], &b = vars[ib], &c = vars[ic];
      Expr j = Expr(sgn(a, c)) * bracket_of(Expr(a), table.get(b, c), table) +
               Expr(sgn(b, a)) * bracket_of(Expr(b), table.get(c, a), table) +
               Expr(sgn(c, b)) * bracket_of(Expr(c), table.get(a, b), table);
      out[t] = j;
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  const long long count = static_cast<long long>(triples.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long t = 0; t < count; ++t) run(static_cast<size_t>(t));
  } else {
    for (long long t = 0; t < count; ++t) run(static_cast<size_t>(t));
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Expr> nonzero;
  for (auto& e : out)
    if (!e.is_zero()) nonzero.push_back(std::move(e));
  return nonzero;
}

double max_abs_serial(const std::vector<CompiledExpr>& exprs, const std::vector<double>& points, size_t dim) {
  const size_t count = dim ? points.size() / dim : 0;
  double worst = 0;
  for (size_t p = 0; p < count; ++p)
    for (const auto& e : exprs) worst = std::max(worst, std::abs(e.eval_complex(&points[p * dim])));
  return worst;
}

double max_abs(const std::vector<CompiledExpr>& exprs, const std::vector<double>& points, size_t dim) {
  const long long count = dim ? static_cast<long long>(points.size() / dim) : 0;
  std::vector<double> per_point(static_cast<size_t>(count), 0.0);
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < count; ++p) {
    double w = 0;
    for (const auto& e : exprs) w = std::max(w, std::abs(e.eval_complex(&points[static_cast<size_t>(p) * dim])));
    per_point[static_cast<size_t>(p)] = w;
  }
  double worst = 0;
  for (double w : per_point) worst = std::max(worst, w);
  return worst;
}

CheckResult jacobi_check(const SystemSpec& spec, const BracketTable& table, const ICConstraintSet& ics,
                         size_t samples, uint64_t seed, double tol) {
  CheckResult res;
  res.name = "jacobi";
  res.params = {{"samples", std::to_string(samples)}, {"seed", std::to_string(seed)}};
  auto exprs = jacobi_expressions(table);
  if (exprs.empty()) {
    res.symbolic = true;
    return res;
  }
  if (spec.has_odd()) {
    res.status = CheckStatus::Fail;
    res.residual = static_cast<double>(exprs.size());
    res.detail = std::to_string(exprs.size()) + " graded Jacobi sums are nonzero, e.g. " + exprs.front().str();
    return res;
  }
  PhaseSampler sampler(spec, ics);
  std::vector<CompiledExpr> compiled;
  for (const auto& e : exprs) compiled.emplace_back(e, sampler.columns());
  std::mt19937_64 rng(seed);
  auto pts = sampler.draw(samples, rng);
  res.residual = max_abs(compiled, pts, sampler.columns().size());
  if (!(res.residual <= tol)) {
    res.status = CheckStatus::Fail;
    res.detail = "Jacobi residual " + std::to_string(res.residual) + " exceeds tolerance; e.g. " + exprs.front().str();
  }
  return res;
}

}  // namespace ib
