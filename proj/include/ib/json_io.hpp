#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ib/dirac_oracle.hpp"
#include "ib/lattice.hpp"
#include "ib/pipeline.hpp"

namespace ib {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::optional<LatticeConfig> lattice;
  int order = 3;
  int degree = 2;
  size_t samples = 200;
  uint64_t seed = 42;
  double tol = 1e-9;
  std::string out;
  std::vector<std::string> checks = kAllChecks;

  DeriveOptions derive_options() const;
};

Json to_json(const RunConfig& cfg);
Json to_json(const SystemSpec& spec);
Json to_json(const BracketTable& table);
Json to_json(const CheckResult& check);

Json derivation_json(const RunConfig& cfg, const Derivation& d);
Json report_json(const RunConfig& cfg, const Derivation& d, const VerificationReport& rep);
Json oracle_json(const RunConfig& cfg, const SystemSpec& spec, const Closure& closure, const ConstraintInverse& inv,
                 const OracleComparison& cmp);

}  // namespace ib
