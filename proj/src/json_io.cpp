#include "ib/json_io.hpp"

namespace ib {

DeriveOptions RunConfig::derive_options() const {
  DeriveOptions o;
  o.order = order;
  o.solve.degree = degree;
  o.solve.samples = samples;
  o.solve.seed = seed;
  o.solve.tol = tol;
  return o;
}

Json to_json(const RunConfig& cfg) {
  Json j;
  j["subcommand"] = cfg.subcommand;
  if (cfg.lattice) {
    j["lattice"] = {{"model", to_string(cfg.lattice->model)},
                    {"n", cfg.lattice->n},
                    {"a", cfg.lattice->a.str()},
                    {"m", cfg.lattice->m.str()}};
  } else {
    j["input"] = cfg.input;
  }
  j["order"] = cfg.order;
  j["degree"] = cfg.degree;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  j["out"] = cfg.out;
  j["checks"] = cfg.checks;
  return j;
}

Json to_json(const SystemSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["params"] = Json::array();
  for (const auto& p : spec.params) j["params"].push_back({{"name", p.symbol.name()}, {"positive", p.positive}});
  j["coords"] = Json::array();
  for (const auto& c : spec.coords()) j["coords"].push_back({{"name", c.name()}, {"parity", to_string(c.parity())}});
  j["lagrangian"] = spec.lagrangian.str();
  Json meta = Json::object();
  for (const auto& [k, v] : spec.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

Json to_json(const BracketTable& table) {
  Json arr = Json::array();
  for (const auto& e : table.entries())
    arr.push_back({{"a", e.a.name()}, {"b", e.b.name()}, {"value", e.value.str()}, {"provenance", to_string(e.provenance)}});
  return arr;
}

Json to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["status"] = to_string(c.status);
  if (c.symbolic && c.status == CheckStatus::Pass)
    j["residual"] = "symbolic-zero";
  else
    j["residual"] = c.residual;
  Json params = Json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  j["params"] = params;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json derivation_json(const RunConfig& cfg, const Derivation& d) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["config"] = to_json(cfg);
  j["system"] = to_json(d.spec);
  j["independent"] = Json::array();
  for (const auto& s : d.ics.independent) j["independent"].push_back(s.name());
  j["constraints"] = Json::array();
  for (const auto& c : d.ics.constraints)
    j["constraints"].push_back({{"eliminated", c.eliminated.name()}, {"expression", c.expression.str()}});
  j["hamiltonian"] = d.hamiltonian.str();
  j["brackets"] = to_json(d.table);
  j["residual"] = d.solution.residual;
  j["nullspace_dim"] = d.solution.nullspace_dim;
  j["basis_degree"] = d.solution.degree;
  j["exact"] = d.solution.exact;
  j["warnings"] = d.table.warnings;
  return j;
}

Json report_json(const RunConfig& cfg, const Derivation& d, const VerificationReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["config"] = to_json(cfg);
  j["system"] = d.spec.name;
  j["checks"] = Json::array();
  for (const auto& c : rep.checks) j["checks"].push_back(to_json(c));
  j["pass"] = rep.pass();
  return j;
}

Json oracle_json(const RunConfig& cfg, const SystemSpec& spec, const Closure& closure, const ConstraintInverse& inv,
                 const OracleComparison& cmp) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["config"] = to_json(cfg);
  j["system"] = spec.name;
  j["hamiltonian"] = closure.hamiltonian.str();
  j["constraints"] = Json::array();
  for (const auto& c : closure.constraints)
    j["constraints"].push_back(
        {{"expression", c.expr.str()},
         {"origin", c.origin == 0 ? std::string("primary") : "consistency-step " + std::to_string(c.origin)},
         {"class", to_string(c.cls)}});
  j["matrix_size"] = closure.constraints.size();
  j["inverse"] = inv.inverse ? "symbolic" : "numeric";
  j["points"] = cmp.points;
  j["deviation"] = cmp.deviation;
  j["max_condition"] = cmp.max_condition;
  j["worst_pair"] = cmp.worst_pair;
  j["pass"] = cmp.deviation < cfg.tol;
  return j;
}

}  // namespace ib
