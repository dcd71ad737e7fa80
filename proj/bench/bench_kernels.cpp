#include <benchmark/benchmark.h>

#include "ib/dirac_oracle.hpp"
#include "ib/lattice.hpp"
#include "ib/pipeline.hpp"

using namespace ib;

namespace {

const std::string kToy = std::string(IB_DATA_DIR) + "/toy.lag";

struct ToyCollocation {
  IdentificationSystem sys;
  std::vector<Expr> basis;
  SampleSpace space;
  ToyCollocation() {
    auto d = derive(load_system(kToy));
    sys = d.system;
    basis = harvest_basis(sys, 2);
    for (const auto& s : sys.independent) {
      space.vars.push_back(s);
      space.positive.push_back(false);
    }
  }
};

const ToyCollocation& toy_collocation() {
  static ToyCollocation t;
  return t;
}

template <bool Parallel>
void BM_CollocationAssembly(benchmark::State& state) {
  const auto& t = toy_collocation();
  CollocationProblem prob(t.sys.equations, t.sys.slots.size(), t.basis, t.space.vars);
  std::mt19937_64 rng(42);
  auto pts = draw_points(t.space, static_cast<size_t>(state.range(0)), rng);
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  for (auto _ : state) {
    if (Parallel)
      prob.assemble(pts, a, b);
    else
      prob.assemble_serial(pts, a, b);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_CollocationAssembly<false>)->Name("collocation_assembly/serial")->Arg(2000);
BENCHMARK(BM_CollocationAssembly<true>)->Name("collocation_assembly/parallel")->Arg(2000);

// Jacobi sums of a table that violates the identity, so every sum is live.
template <bool Parallel>
void BM_JacobiSweep(benchmark::State& state) {
  auto d = derive(load_system(kToy));
  d.table.set(d.spec.coord(0), d.spec.momentum(0), Expr(d.spec.coord(2)), Provenance::Solved);
  auto exprs = jacobi_expressions(d.table);
  PhaseSampler sampler(d.spec, d.ics);
  std::vector<CompiledExpr> compiled;
  for (const auto& e : exprs) compiled.emplace_back(e, sampler.columns());
  std::mt19937_64 rng(42);
  auto pts = sampler.draw(static_cast<size_t>(state.range(0)), rng);
  const size_t dim = sampler.columns().size();
  for (auto _ : state) {
    double r = Parallel ? max_abs(compiled, pts, dim) : max_abs_serial(compiled, pts, dim);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_JacobiSweep<false>)->Name("jacobi_sweep/serial")->Arg(20000);
BENCHMARK(BM_JacobiSweep<true>)->Name("jacobi_sweep/parallel")->Arg(20000);

template <bool Parallel>
void BM_OracleInversion(benchmark::State& state) {
  LatticeConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  auto spec = gen_sd(cfg);
  auto d = derive(spec);
  auto closure = consistency_closure(spec, primary_constraints(spec));
  DiracEvaluator ev(spec, closure);
  std::mt19937_64 rng(42);
  auto pts = ev.draw(100, rng);
  for (auto _ : state) {
    auto c = Parallel ? compare_tables(d.table, ev, pts) : compare_tables_serial(d.table, ev, pts);
    benchmark::DoNotOptimize(c.deviation);
  }
}
BENCHMARK(BM_OracleInversion<false>)->Name("oracle_points/serial")->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleInversion<true>)->Name("oracle_points/parallel")->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
