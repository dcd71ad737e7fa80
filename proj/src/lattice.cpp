#include "ib/lattice.hpp"

#include "ib/error.hpp"

namespace ib {

const char* to_string(LatticeModel m) { return m == LatticeModel::SelfDual ? "sd" : "dirac"; }

LatticeModel parse_model(const std::string& name) {
  if (name == "sd") return LatticeModel::SelfDual;
  if (name == "dirac") return LatticeModel::Dirac;
  throw Error(ErrorKind::InvalidArgument, "unknown lattice model '" + name + "' (expected sd or dirac)");
}

void LatticeConfig::validate() const {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "lattice needs at least 2 sites per dimension");
  if (a.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "lattice spacing must be positive");
  if (m.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "mass must be positive");
}

namespace {

std::string site(int i, int j) { return std::to_string(i) + "_" + std::to_string(j); }

void add_metadata(SystemSpec& spec, const LatticeConfig& cfg) {
  spec.metadata = {{"model", to_string(cfg.model)}, {"n", std::to_string(cfg.n)}, {"a", cfg.a.str()}, {"m", cfg.m.str()}};
}

}  // namespace

SystemSpec gen_sd(const LatticeConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  std::vector<std::pair<std::string, Parity>> coords;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      coords.emplace_back("f1_" + site(i, j), Parity::Even);
      coords.emplace_back("f2_" + site(i, j), Parity::Even);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) coords.emplace_back("f0_" + site(i, j), Parity::Even);
  SystemSpec spec("sd_lattice_" + std::to_string(n), {}, coords);

  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  auto f = [&](int c, int i, int j) {
    i = wrap(i);
    j = wrap(j);
    size_t idx = c == 0 ? static_cast<size_t>(2 * n * n + i * n + j) : static_cast<size_t>(2 * (i * n + j) + c - 1);
    return idx;
  };
  auto q = [&](int c, int i, int j) { return Expr(spec.coord(f(c, i, j))); };
  auto dq = [&](int c, int i, int j) { return Expr(spec.velocity(f(c, i, j))); };
  const Expr inv_a(Rational(1) / cfg.a);
  auto d1 = [&](int c, int i, int j) { return inv_a * (q(c, i + 1, j) - q(c, i, j)); };
  auto d2 = [&](int c, int i, int j) { return inv_a * (q(c, i, j + 1) - q(c, i, j)); };

  // eps^{mu nu rho} f_mu d_nu f_rho with lowered f_0 = f0, f_i = -fi.
  Expr density;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr s = -q(0, i, j) * d1(2, i, j) + q(0, i, j) * d2(1, i, j) - q(1, i, j) * dq(2, i, j) -
               q(1, i, j) * d2(0, i, j) + q(2, i, j) * dq(1, i, j) + q(2, i, j) * d1(0, i, j);
      Expr mass = q(0, i, j) * q(0, i, j) - q(1, i, j) * q(1, i, j) - q(2, i, j) * q(2, i, j);
      density += Expr(Rational(-1) / (Rational(2) * cfg.m)) * s + Expr(Rational(1, 2)) * mass;
    }
  spec.lagrangian = Expr(cfg.a * cfg.a) * density;
  add_metadata(spec, cfg);
  return spec;
}

SystemSpec gen_dirac(const LatticeConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  std::vector<std::pair<std::string, Parity>> coords;
  for (int s = 0; s < n; ++s)
    for (int c = 1; c <= 4; ++c) coords.emplace_back("psi" + std::to_string(c) + "_" + std::to_string(s), Parity::Odd);
  for (int s = 0; s < n; ++s)
    for (int c = 1; c <= 4; ++c) coords.emplace_back("psic" + std::to_string(c) + "_" + std::to_string(s), Parity::Odd);
  SystemSpec spec("dirac_lattice_" + std::to_string(n), {}, coords);

  auto idx = [n](bool conj, int c, int s) {
    s = ((s % n) + n) % n;
    return static_cast<size_t>((conj ? 4 * n : 0) + 4 * s + c - 1);
  };
  auto psi = [&](int c, int s) { return Expr(spec.coord(idx(false, c, s))); };
  auto psic = [&](int c, int s) { return Expr(spec.coord(idx(true, c, s))); };
  auto dpsi = [&](int c, int s) { return Expr(spec.velocity(idx(false, c, s))); };
  const Expr im = Expr::imaginary_unit();
  const Expr half_inv_a(Rational(1) / (Rational(2) * cfg.a));
  const int beta[4] = {1, 1, -1, -1};

  Expr density;
  for (int s = 0; s < n; ++s)
    for (int c = 1; c <= 4; ++c) {
      density += im * psic(c, s) * dpsi(c, s);
      // alpha^1 is the antidiagonal of ones in the Dirac representation
      const int b = 5 - c;
      density += im * psic(c, s) * half_inv_a * (psi(b, s + 1) - psi(b, s - 1));
      density -= Expr(cfg.m * Rational(beta[c - 1])) * psic(c, s) * psi(c, s);
    }
  spec.lagrangian = Expr(cfg.a) * density;
  add_metadata(spec, cfg);
  spec.metadata.emplace_back("gamma", "dirac representation, gamma0 = diag(1,1,-1,-1), alpha1 = antidiag(1,1,1,1)");
  return spec;
}

SystemSpec generate(const LatticeConfig& cfg) {
  return cfg.model == LatticeModel::SelfDual ? gen_sd(cfg) : gen_dirac(cfg);
}

BracketTable expected_table(const LatticeConfig& cfg, const SystemSpec& spec) {
  BracketTable t(spec.name, spec.phase_variables(), spec.param_symbols());
  const int n = cfg.n;
  if (cfg.model == LatticeModel::SelfDual) {
    // {f1_s, f2_s} = -m / a^2 on the same site, zero elsewhere
    const size_t fields = static_cast<size_t>(2 * n * n);
    const Expr on_site(-cfg.m / (cfg.a * cfg.a));
    for (size_t i = 0; i < fields; ++i)
      for (size_t j = i + 1; j < fields; ++j) {
        bool pair = i % 2 == 0 && j == i + 1;
        t.set(spec.coord(i), spec.coord(j), pair ? on_site : Expr(), Provenance::Solved);
      }
  } else {
    const size_t half = static_cast<size_t>(4 * n);
    const Expr value = Expr(Rational(-1) / cfg.a) * Expr::imaginary_unit();
    for (size_t i = 0; i < 2 * half; ++i)
      for (size_t j = i; j < 2 * half; ++j) {
        bool conj_pair = i < half && j == i + half;
        t.set(spec.coord(i), spec.coord(j), conj_pair ? value : Expr(), Provenance::Solved);
      }
  }
  return t;
}

}  // namespace ib
