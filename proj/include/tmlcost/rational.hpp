#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tmlcost {

/// Exact rational number with unbounded numerator and denominator.
///
/// Values are always kept in lowest terms with a positive denominator. All
/// times and costs in the analyzer and the interpreter are Rationals; nothing
/// in the pipeline ever converts to floating point.
class Rational {
public:
  using Int = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  Rational(const Int& num, const Int& den);

  /// Parses "n", "-n" or "n/d".
  static Rational parse(std::string_view text);

  Int numerator() const { return boost::multiprecision::numerator(value_); }
  Int denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_integer() const { return denominator() == 1; }
  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  Rational operator-() const { return Rational(-value_); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "n" for integers, "n/d" otherwise.
  std::string str() const;
  std::size_t hash() const;

  /// Largest integer not greater than this value.
  Int floor() const;

private:
  using Value = boost::multiprecision::cpp_rational;
  explicit Rational(Value v) : value_(std::move(v)) {}

  Value value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

class DivisionByZero : public std::domain_error {
public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

}  // namespace tmlcost

template <>
struct std::hash<tmlcost::Rational> {
  std::size_t operator()(const tmlcost::Rational& r) const noexcept { return r.hash(); }
};
