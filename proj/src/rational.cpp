#include "tmlcost/rational.hpp"

#include <charconv>
#include <functional>
#include <ostream>

namespace tmlcost {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DivisionByZero();
  *this = Rational(Int(num), Int(den));
}

Rational::Rational(const Int& num, const Int& den) {
  if (den == 0) throw DivisionByZero();
  // the backend rejects negative denominators
  value_ = den < 0 ? Value(Int(-num), Int(-den)) : Value(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw DivisionByZero();
  value_ /= o.value_;
  return *this;
}

namespace {

Rational::Int parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  bool neg = false;
  if (s.front() == '-' || s.front() == '+') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  Rational::Int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad integer literal: " + std::string(s));
    v = v * 10 + (c - '0');
  }
  return neg ? Rational::Int(-v) : v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), Int(1));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::str() const {
  if (is_integer()) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

std::size_t Rational::hash() const {
  std::size_t h = std::hash<std::string>{}(numerator().str());
  return h ^ (std::hash<std::string>{}(denominator().str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational::Int Rational::floor() const {
  Int n = numerator();
  Int d = denominator();
  Int q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace tmlcost
