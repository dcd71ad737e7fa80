#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ib {

// Exact rational with int64 parts. Every operation checks for overflow and
// throws Error(Overflow) rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(int64_t n) : num_(n) {}  // NOLINT(implicit)
  Rational(int64_t n, int64_t d);

  // Exact conversion of a decimal literal such as "0.25" or "12".
  static Rational from_decimal(std::string_view text);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  double to_double() const { return double(num_) / double(den_); }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  std::string str() const;

  Rational operator-() const;
  Rational inverse() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 n, __int128 d);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

// Closest rational with denominator <= max_den within tol, if any.
bool snap_rational(double value, int64_t max_den, double tol, Rational& out);

}  // namespace ib
