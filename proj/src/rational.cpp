#include "ib/rational.hpp"

#include <cmath>
#include <limits>

#include "ib/error.hpp"

namespace ib {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::NonAutonomous: return "NonAutonomous";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::DuplicateCoord: return "DuplicateCoord";
    case ErrorKind::OddEvaluation: return "OddEvaluation";
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonConservedHamiltonian: return "NonConservedHamiltonian";
    case ErrorKind::OddHamiltonian: return "OddHamiltonian";
    case ErrorKind::GaugeFreedom: return "GaugeFreedom";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::UnsolvableConstraint: return "UnsolvableConstraint";
    case ErrorKind::BasisInsufficient: return "BasisInsufficient";
    case ErrorKind::NonUniqueBrackets: return "NonUniqueBrackets";
    case ErrorKind::CovarianceViolation: return "CovarianceViolation";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::EquivalenceViolation: return "EquivalenceViolation";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr __int128 lo = std::numeric_limits<int64_t>::min() + 1;
  constexpr __int128 hi = std::numeric_limits<int64_t>::max();
  if (n < lo || n > hi || d > hi) throw Error(ErrorKind::Overflow, "rational coefficient overflow");
  Rational r;
  r.num_ = static_cast<int64_t>(n);
  r.den_ = static_cast<int64_t>(n == 0 ? 1 : d);
  return r;
}

Rational::Rational(int64_t n, int64_t d) { *this = from_wide(n, d); }

Rational Rational::from_decimal(std::string_view text) {
  __int128 num = 0;
  __int128 den = 1;
  bool seen_dot = false;
  bool any = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw Error(ErrorKind::SyntaxError, "malformed number");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw Error(ErrorKind::SyntaxError, "malformed number");
    any = true;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (num > std::numeric_limits<int64_t>::max() || den > std::numeric_limits<int64_t>::max())
      throw Error(ErrorKind::Overflow, "numeric literal too large");
  }
  if (!any) throw Error(ErrorKind::SyntaxError, "malformed number");
  return from_wide(num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational Rational::inverse() const {
  if (num_ == 0) throw Error(ErrorKind::SingularMatrix, "inverse of zero");
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool snap_rational(double value, int64_t max_den, double tol, Rational& out) {
  if (!std::isfinite(value)) return false;
  for (int64_t q = 1; q <= max_den; ++q) {
    double p = std::round(value * double(q));
    if (std::fabs(p) > 9.0e15) return false;
    if (std::fabs(value - p / double(q)) <= tol) {
      out = Rational(static_cast<int64_t>(p), q);
      return true;
    }
  }
  return false;
}

}  // namespace ib
