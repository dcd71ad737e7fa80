#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ib/error.hpp"
#include "ib/json_io.hpp"

using namespace ib;

namespace {

enum Exit { kOk = 0, kParse = 1, kGauge = 2, kIdentification = 3, kVerification = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::GaugeFreedom: return kGauge;
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownSymbol:
    case ErrorKind::NonAutonomous:
    case ErrorKind::ParityViolation:
    case ErrorKind::DuplicateCoord:
    case ErrorKind::InvalidArgument: return kParse;
    case ErrorKind::CovarianceViolation:
    case ErrorKind::JacobiViolation:
    case ErrorKind::EquivalenceViolation:
    case ErrorKind::StepRejected: return kVerification;
    default: return kIdentification;
  }
}

struct Cli {
  RunConfig cfg;
  std::string model;
  int n = 2;
  std::string a = "1", m = "1";
  bool json = false;
  bool corrupt = false;
  std::string checks;
};

void add_common(CLI::App* sub, Cli& c, bool input) {
  if (input) sub->add_option("input", c.cfg.input, "system file (.lag)");
  sub->add_option("--lattice", c.model, "generate a lattice system instead: sd or dirac");
  sub->add_option("--n", c.n, "lattice sites per dimension");
  sub->add_option("--a", c.a, "lattice spacing");
  sub->add_option("--m", c.m, "mass");
  sub->add_option("--order", c.cfg.order, "Taylor order K");
  sub->add_option("--degree", c.cfg.degree, "maximum basis degree");
  sub->add_option("--samples", c.cfg.samples, "collocation / check sample count");
  sub->add_option("--seed", c.cfg.seed, "random seed");
  sub->add_option("--tol", c.cfg.tol, "tolerance");
  sub->add_option("--out", c.cfg.out, "write JSON here");
  sub->add_flag("--json", c.json, "print JSON on stdout even with --out");
}

LatticeConfig lattice_config(const Cli& c, const std::string& model) {
  LatticeConfig l;
  l.model = parse_model(model);
  l.n = c.n;
  l.a = Rational::from_decimal(c.a);
  l.m = Rational::from_decimal(c.m);
  l.validate();
  return l;
}

SystemSpec load(Cli& c) {
  if (!c.model.empty()) {
    c.cfg.lattice = lattice_config(c, c.model);
    return generate(*c.cfg.lattice);
  }
  if (c.cfg.input.empty()) throw Error(ErrorKind::InvalidArgument, "no input file or --lattice given");
  return load_system(c.cfg.input);
}

void emit(const Cli& c, const Json& j, const std::string& summary) {
  const std::string text = j.dump(2) + "\n";
  if (!c.cfg.out.empty()) {
    std::ofstream f(c.cfg.out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + c.cfg.out + "'");
    f << text;
  }
  if (c.cfg.out.empty() || c.json)
    std::cout << text;
  else
    std::cout << summary << "\n";
}

std::vector<std::string> split_checks(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_derive(Cli& c) {
  auto spec = load(c);
  auto d = derive(spec, c.cfg.derive_options());
  for (const auto& w : d.table.warnings) std::cerr << "warning: " << w << "\n";
  emit(c, derivation_json(c.cfg, d), "derived " + std::to_string(d.table.entries().size()) + " brackets");
  return kOk;
}

int run_verify(Cli& c) {
  if (!c.checks.empty()) c.cfg.checks = split_checks(c.checks);
  auto spec = load(c);
  auto d = derive(spec, c.cfg.derive_options());
  if (c.corrupt) inject_corruption(d.spec, d.table);
  VerifyOptions vo;
  vo.checks = c.cfg.checks;
  vo.samples = c.cfg.samples;
  vo.seed = c.cfg.seed;
  vo.tol = c.cfg.tol;
  auto rep = verify(d, vo);
  std::string summary;
  for (const auto& r : rep.checks) summary += r.name + ": " + to_string(r.status) + "\n";
  emit(c, report_json(c.cfg, d, rep), summary.substr(0, summary.size() ? summary.size() - 1 : 0));
  for (const auto& r : rep.checks)
    if (r.status == CheckStatus::Fail) std::cerr << r.name << " failed: " << r.detail << "\n";
  return rep.pass() ? kOk : kVerification;
}

int run_oracle(Cli& c) {
  auto spec = load(c);
  auto closure = consistency_closure(spec, primary_constraints(spec));
  auto inv = classify_and_invert(spec, closure, c.cfg.seed);
  auto d = derive(spec, c.cfg.derive_options());
  auto cmp = compare_tables(spec, d.table, closure, c.cfg.samples, c.cfg.seed);
  auto j = oracle_json(c.cfg, spec, closure, inv, cmp);
  std::ostringstream summary;
  summary << closure.constraints.size() << " constraints, max deviation " << cmp.deviation;
  emit(c, j, summary.str());
  return cmp.deviation < c.cfg.tol ? kOk : kVerification;
}

int run_lattice(Cli& c, const std::string& model) {
  auto spec = generate(lattice_config(c, model));
  const std::string doc = emit_system(spec);
  if (!c.cfg.out.empty()) {
    std::ofstream f(c.cfg.out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + c.cfg.out + "'");
    f << doc;
  } else {
    std::cout << doc;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"initial-instant bracket derivation for singular Lagrangian systems"};
  app.require_subcommand(1);
  Cli c;
  std::string lattice_model;

  auto* derive_cmd = app.add_subcommand("derive", "derive the bracket table");
  add_common(derive_cmd, c, true);
  auto* verify_cmd = app.add_subcommand("verify", "derive, then run the verification checks");
  add_common(verify_cmd, c, true);
  verify_cmd->add_option("--checks", c.checks, "comma-separated subset of jacobi,covariance,hamilton-equivalence,trajectory");
  verify_cmd->add_flag("--inject-test-corruption", c.corrupt, "replace {q1,p_q1} by q1 before checking");
  auto* oracle_cmd = app.add_subcommand("oracle", "compare against the Dirac-Bergmann algorithm");
  add_common(oracle_cmd, c, true);
  auto* lattice_cmd = app.add_subcommand("lattice", "print a generated lattice system");
  lattice_cmd->add_option("model", lattice_model, "sd or dirac")->required();
  lattice_cmd->add_option("--n", c.n, "sites per dimension");
  lattice_cmd->add_option("--a", c.a, "lattice spacing");
  lattice_cmd->add_option("--m", c.m, "mass");
  lattice_cmd->add_option("--out", c.cfg.out, "write the document here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*derive_cmd) {
      c.cfg.subcommand = "derive";
      return run_derive(c);
    }
    if (*verify_cmd) {
      c.cfg.subcommand = "verify";
      return run_verify(c);
    }
    if (*oracle_cmd) {
      c.cfg.subcommand = "oracle";
      return run_oracle(c);
    }
    c.cfg.subcommand = "lattice";
    return run_lattice(c, lattice_model);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]";
    if (e.line()) std::cerr << " at " << e.line() << ":" << e.column();
    std::cerr << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
}
