#include "ib/collocation.hpp"

#include <algorithm>

#include "ib/error.hpp"

namespace ib {

namespace {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<double> draw_points(const SampleSpace& space, size_t count, std::mt19937_64& rng) {
  std::vector<double> pts;
  pts.reserve(count * space.vars.size());
  for (size_t p = 0; p < count; ++p)
    for (size_t v = 0; v < space.vars.size(); ++v) {
      double mag = 0.5 + 1.5 * unit_draw(rng);
      bool neg = !space.positive[v] && (rng() & 1u);
      pts.push_back(neg ? -mag : mag);
    }
  return pts;
}

CollocationProblem::CollocationProblem(const std::vector<ScalarEquation>& eqs, size_t slots,
                                       const std::vector<Expr>& basis, const std::vector<Symbol>& vars)
    : slots_(slots), dim_(vars.size()) {
  for (const auto& e : eqs) {
    if (e.lhs.is_zero() && e.terms.empty()) continue;
    lhs_.emplace_back(e.lhs, vars);
    std::vector<std::pair<size_t, CompiledExpr>> t;
    for (const auto& [s, c] : e.terms) {
      if (s >= slots) throw Error(ErrorKind::InvalidArgument, "slot index out of range");
      if (!c.is_zero()) t.emplace_back(s, CompiledExpr(c, vars));
    }
    terms_.push_back(std::move(t));
  }
  for (const auto& f : basis) basis_.emplace_back(f, vars);
}

void CollocationProblem::fill_point(const double* x, Eigen::Index row0, Eigen::MatrixXcd& a,
                                    Eigen::VectorXcd& b) const {
  const size_t nb = basis_.size();
  std::vector<std::complex<double>> phi(nb);
  for (size_t k = 0; k < nb; ++k) phi[k] = basis_[k].eval_complex(x);
  for (size_t e = 0; e < lhs_.size(); ++e) {
    Eigen::Index row = row0 + static_cast<Eigen::Index>(e);
    b(row) = lhs_[e].eval_complex(x);
    for (const auto& [s, c] : terms_[e]) {
      std::complex<double> v = c.eval_complex(x);
      for (size_t k = 0; k < nb; ++k) a(row, static_cast<Eigen::Index>(s * nb + k)) += v * phi[k];
    }
  }
}

void CollocationProblem::assemble_serial(const std::vector<double>& points, Eigen::MatrixXcd& a,
                                         Eigen::VectorXcd& b) const {
  const size_t n = dim_ ? points.size() / dim_ : 1;
  a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n * equations()), static_cast<Eigen::Index>(columns()));
  b = Eigen::VectorXcd::Zero(a.rows());
  for (size_t p = 0; p < n; ++p) fill_point(points.data() + p * dim_, static_cast<Eigen::Index>(p * equations()), a, b);
}

void CollocationProblem::assemble(const std::vector<double>& points, Eigen::MatrixXcd& a,
                                  Eigen::VectorXcd& b) const {
  const size_t n = dim_ ? points.size() / dim_ : 1;
  a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n * equations()), static_cast<Eigen::Index>(columns()));
  b = Eigen::VectorXcd::Zero(a.rows());
  // each point owns a disjoint block of rows
#pragma omp parallel for schedule(static)
  for (long p = 0; p < static_cast<long>(n); ++p)
    fill_point(points.data() + static_cast<size_t>(p) * dim_, static_cast<Eigen::Index>(p) * static_cast<Eigen::Index>(equations()), a, b);
}

CollocationResult collocation_solve(const std::vector<ScalarEquation>& eqs, size_t slots,
                                    const std::vector<Expr>& basis, const SampleSpace& space,
                                    const CollocationOptions& opts) {
  CollocationProblem prob(eqs, slots, basis, space.vars);
  CollocationResult res;
  const Eigen::Index cols = static_cast<Eigen::Index>(prob.columns());
  res.coeffs = Eigen::VectorXcd::Zero(cols);
  if (prob.equations() == 0 || cols == 0) {
    res.nullspace_dim = static_cast<size_t>(cols);
    if (cols) res.witness = Eigen::VectorXcd::Unit(cols, 0);
    return res;
  }
  // without sample variables every point is the same point
  const size_t samples = space.vars.empty() ? 1 : opts.samples;
  std::mt19937_64 rng(opts.seed);
  auto fit_pts = draw_points(space, samples, rng);
  auto val_pts = draw_points(space, samples, rng);

  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  prob.assemble(fit_pts, a, b);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  res.coeffs = qr.solve(b);

  // rank from the singular values of R, which match those of A
  const Eigen::Index k = std::min(a.rows(), cols);
  Eigen::MatrixXcd r = qr.matrixR().topLeftCorner(k, cols).template triangularView<Eigen::Upper>();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(r, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double cut = std::max(smax * 1e-9, 1e-300);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  res.nullspace_dim = static_cast<size_t>(cols - rank);
  if (res.nullspace_dim > 0) {
    Eigen::VectorXcd v = qr.colsPermutation() * svd.matrixV().col(cols - 1);
    res.witness = v;
  }

  Eigen::MatrixXcd av;
  Eigen::VectorXcd bv;
  prob.assemble(val_pts, av, bv);
  res.residual = av.rows() ? (av * res.coeffs - bv).cwiseAbs().maxCoeff() : 0.0;
  return res;
}

}  // namespace ib
