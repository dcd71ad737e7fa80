#pragma once

#include <vector>

#include "ib/mechanics.hpp"
#include "ib/sysparse.hpp"
#include "ib/taylor_solution.hpp"

namespace ib {

struct TaylorOptions {
  // Stages run past K when an algebraic equation only pins a coefficient
  // after further differentiation.
  int extra_stages = 4;
};

TaylorSolution taylor_solve(const SystemSpec& spec, int order, const TaylorOptions& opts = {});

// Series of e (in coordinates, velocities, accelerations) along the Taylor
// solution, truncated at the given order.
SeriesPoly along_solution(const SystemSpec& spec, const TaylorSolution& tsol, const Expr& e, int order);

struct SelectionPolicy {
  bool prefer_momenta = true;
  bool highest_index_first = true;
};

// Solves relations one at a time for a single initial-condition symbol,
// following the policy; the remaining symbols form the independent set.
ICConstraintSet select_independent(const SystemSpec& spec, const std::vector<Expr>& relations,
                                   const SelectionPolicy& policy = {});

ICConstraintSet detect_ic_constraints(const SystemSpec& spec, const TaylorSolution& tsol);

}  // namespace ib
