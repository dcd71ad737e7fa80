#include "ib/initial_instant.hpp"

#include <algorithm>
#include <optional>

#include "ib/error.hpp"

namespace ib {

namespace {

// e = s*c + r with c a unit free of s; returns s = -c^-1 r.
std::optional<Expr> isolate(const Expr& e, const Symbol& s, Expr* coefficient = nullptr) {
  if (!contains_symbol(e, s)) return std::nullopt;
  Expr c = differentiate(e, s, Side::Left);
  if (c.is_zero() || !c.is_unit() || contains_symbol(c, s)) return std::nullopt;
  if (coefficient) *coefficient = c;
  Expr r = substitute(e, Bindings{{s, Expr()}});
  return -(c.unit_inverse() * r);
}

void bind_symbol(Bindings& map, const Symbol& s, const Expr& value) {
  Bindings one{{s, value}};
  for (auto& [k, v] : map) v = substitute(v, one);
  map[s] = value;
}

std::vector<Symbol> candidate_order(const SystemSpec& spec, const SelectionPolicy& policy) {
  std::vector<Symbol> coords, moms;
  for (size_t i = 0; i < spec.size(); ++i) {
    coords.push_back(spec.initial_coord(i));
    moms.push_back(spec.initial_momentum(i));
  }
  if (policy.highest_index_first) {
    std::reverse(coords.begin(), coords.end());
    std::reverse(moms.begin(), moms.end());
  }
  std::vector<Symbol> out = policy.prefer_momenta ? moms : coords;
  const auto& rest = policy.prefer_momenta ? coords : moms;
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool has_unknowns(const Expr& e) {
  for (const auto& s : symbols_of(e))
    if (kind_of(s) == SymbolKind::Unknown) return true;
  return false;
}

}  // namespace

SeriesPoly along_solution(const SystemSpec& spec, const TaylorSolution& tsol, const Expr& e, int order) {
  std::map<Symbol, SeriesPoly> subs;
  for (size_t i = 0; i < spec.size(); ++i) {
    const SeriesPoly& q = tsol.coords.at(i);
    if (contains_symbol(e, spec.coord(i))) subs.emplace(spec.coord(i), q);
    if (contains_symbol(e, spec.velocity(i))) subs.emplace(spec.velocity(i), q.derivative());
    if (contains_symbol(e, spec.accel(i))) subs.emplace(spec.accel(i), q.derivative().derivative());
  }
  return compose(e, subs, order);
}

TaylorSolution taylor_solve(const SystemSpec& spec, int order, const TaylorOptions& opts) {
  if (order < 2) throw Error(ErrorKind::InvalidArgument, "Taylor order must be at least 2");
  const size_t n = spec.size();
  const EulerLagrangeSystem el = euler_lagrange(spec);
  const std::vector<Expr> mom = momenta(spec);

  // Coordinates whose velocity enters L need one extra coefficient so the
  // momentum series reaches the same order.
  std::vector<int> needed(n, order);
  for (size_t i = 0; i < n; ++i)
    if (contains_symbol(spec.lagrangian, spec.velocity(i))) needed[i] = order + 1;

  Bindings solution;
  Bindings relation_map;
  TaylorSolution out;
  out.order = order;
  const auto policy_order = candidate_order(spec, SelectionPolicy{});

  auto record_relation = [&](const Expr& e) {
    Expr r = substitute(e, relation_map);
    if (r.is_zero()) return;
    if (r.is_constant())
      throw Error(ErrorKind::Inconsistent, "equations of motion force " + r.str() + " = 0");
    out.relations.push_back(r);
    for (const auto& s : policy_order)
      if (auto v = isolate(r, s)) {
        bind_symbol(relation_map, s, *v);
        return;
      }
  };

  int composed_order = -1;
  std::vector<SeriesPoly> el_series;
  auto compose_to = [&](int k) {
    std::map<Symbol, SeriesPoly> subs;
    for (size_t i = 0; i < n; ++i) {
      std::vector<Expr> c(static_cast<size_t>(k + 3));
      c[0] = Expr(spec.initial_coord(i));
      for (int m = 1; m <= k + 2; ++m) c[static_cast<size_t>(m)] = Expr(spec.unknown(i, m));
      SeriesPoly q(std::move(c));
      subs.emplace(spec.coord(i), q);
      subs.emplace(spec.velocity(i), q.derivative());
      subs.emplace(spec.accel(i), q.derivative().derivative());
    }
    el_series.clear();
    for (const auto& eq : el.equations) el_series.push_back(compose(eq.expr, subs, k));
    composed_order = k;
  };

  auto all_needed = [&]() {
    for (size_t i = 0; i < n; ++i)
      for (int m = 1; m <= needed[i]; ++m)
        if (!solution.count(spec.unknown(i, m))) return false;
    return true;
  };

  std::vector<Expr> pending;
  const int last_stage = order + opts.extra_stages;
  for (int stage = 0; stage <= last_stage; ++stage) {
    if (stage > order && all_needed()) break;
    if (stage > composed_order) compose_to(stage <= order ? order : last_stage);

    if (stage == 0) {
      Bindings at_zero;
      for (size_t i = 0; i < n; ++i) {
        at_zero.emplace(spec.coord(i), Expr(spec.initial_coord(i)));
        at_zero.emplace(spec.velocity(i), Expr(spec.unknown(i, 1)));
      }
      for (size_t i = 0; i < n; ++i) pending.push_back(Expr(spec.initial_momentum(i)) - substitute(mom[i], at_zero));
    }
    for (const auto& s : el_series) pending.push_back(s.coeff(stage));

    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<Expr> still;
      for (const auto& raw : pending) {
        Expr e = substitute(raw, solution);
        if (e.is_zero()) continue;
        if (!has_unknowns(e)) {
          record_relation(e);
          continue;
        }
        // highest-order unknown that can be isolated; ties: simplest
        // coefficient, then lowest coordinate index
        std::optional<Symbol> best;
        Expr best_value, best_coeff;
        int best_n = -1;
        size_t best_size = 0, best_index = 0;
        for (const auto& s : symbols_of(e)) {
          if (kind_of(s) != SymbolKind::Unknown) continue;
          int sn = static_cast<int>(s.rank() & 0xffff);
          size_t si = index_of_rank(s);
          Expr c;
          auto v = isolate(e, s, &c);
          if (!v) continue;
          bool better = !best || sn > best_n || (sn == best_n && c.size() < best_size) ||
                        (sn == best_n && c.size() == best_size && si < best_index);
          if (better) {
            best = s;
            best_value = *v;
            best_n = sn;
            best_size = c.size();
            best_index = si;
          }
        }
        if (!best) {
          still.push_back(e);
          continue;
        }
        bind_symbol(solution, *best, best_value);
        progress = true;
      }
      pending = std::move(still);
    }
  }

  for (size_t i = 0; i < n; ++i)
    for (int m = 1; m <= needed[i]; ++m)
      if (!solution.count(spec.unknown(i, m)))
        throw Error(ErrorKind::GaugeFreedom, "the equations of motion leave the order-" + std::to_string(m) +
                                                 " coefficient of '" + spec.coord(i).name() +
                                                 "' undetermined; fix the gauge before computing");

  std::map<Symbol, SeriesPoly> full;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Expr> c(static_cast<size_t>(needed[i] + 1));
    c[0] = Expr(spec.initial_coord(i));
    for (int m = 1; m <= needed[i]; ++m) c[static_cast<size_t>(m)] = solution.at(spec.unknown(i, m));
    SeriesPoly q(std::move(c));
    out.coords.push_back(q.truncated(order));
    full.emplace(spec.coord(i), q.truncated(order));
    if (needed[i] > order) full.emplace(spec.velocity(i), q.derivative());
  }
  for (size_t i = 0; i < n; ++i) out.momenta.push_back(compose(mom[i], full, order));
  return out;
}

ICConstraintSet select_independent(const SystemSpec& spec, const std::vector<Expr>& relations,
                                   const SelectionPolicy& policy) {
  ICConstraintSet set;
  const auto order = candidate_order(spec, policy);
  std::vector<Symbol> eliminated;
  for (const auto& raw : relations) {
    Expr r = set.reduce(raw);
    if (r.is_zero()) continue;
    if (r.is_constant()) throw Error(ErrorKind::Inconsistent, "initial conditions must satisfy " + r.str() + " = 0");
    std::optional<Symbol> first_present, chosen;
    Expr value;
    for (const auto& s : order) {
      if (!contains_symbol(r, s)) continue;
      if (!first_present) first_present = s;
      if (auto v = isolate(r, s)) {
        chosen = s;
        value = *v;
        break;
      }
    }
    if (!chosen) throw Error(ErrorKind::UnsolvableConstraint, "cannot isolate any initial condition in " + r.str() + " = 0");
    if (!(*chosen == *first_present))
      set.warnings.push_back("relation " + r.str() + " = 0 is nonlinear in " + first_present->name() + "; eliminated " +
                             chosen->name() + " instead");
    bind_symbol(set.elimination, *chosen, value);
    eliminated.push_back(*chosen);
  }
  for (const auto& s : eliminated) set.constraints.push_back({s, set.elimination.at(s)});
  for (const auto& s : spec.initial_symbols())
    if (!set.elimination.count(s)) set.independent.push_back(s);
  return set;
}

ICConstraintSet detect_ic_constraints(const SystemSpec& spec, const TaylorSolution& tsol) {
  return select_independent(spec, tsol.relations);
}

}  // namespace ib
