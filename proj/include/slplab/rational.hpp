#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace slplab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw invalid_input(what);
}

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw internal_error(what);
}

inline Integer binomial_coefficient(int n, int k) {
  require(n >= 0 && k >= 0, "binomial_coefficient: negative argument");
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i) after each step
  }
  return result;
}

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
  require(std::isfinite(x), "rational_from_double: non-finite value");
  return Rational(x);
}

/// Decimal digit string (optional sign) to Integer. Leading zeros are
/// stripped first; cpp_int would read them as an octal prefix.
inline Integer integer_from_decimal_string(std::string text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  require(!text.empty() && text.find_first_not_of("0123456789") == std::string::npos,
          "malformed integer '" + text + "'");
  const auto first_nonzero = text.find_first_not_of('0');
  text = (first_nonzero == std::string::npos) ? "0" : text.substr(first_nonzero);
  const Integer value(text);
  return negative ? Integer(-value) : value;
}

inline Rational pow_rational(Rational base, unsigned exponent) {
  Rational result = 1;
  while (exponent != 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent != 0) base *= base;
  }
  return result;
}

inline std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string compact_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.15g", x);
  return buffer;
}

/// A numeric value that is an exact rational whenever the computation
/// producing it was exact, and a double otherwise. Arithmetic stays exact
/// as long as both operands are exact.
class Real {
 public:
  Real() : value_(0.0) {}
  Real(Rational r) : value_(std::move(r)) {}  // NOLINT: implicit by design
  explicit Real(double v) : value_(v) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }

  const Rational& rational() const {
    ensure(is_exact(), "Real: value has no exact rational representation");
    return std::get<Rational>(value_);
  }

  double value() const {
    if (is_exact()) return std::get<Rational>(value_).convert_to<double>();
    return std::get<double>(value_);
  }

  friend Real operator+(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) return Real(a.rational() + b.rational());
    return Real(a.value() + b.value());
  }
  friend Real operator-(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) return Real(a.rational() - b.rational());
    return Real(a.value() - b.value());
  }
  friend Real operator*(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) return Real(a.rational() * b.rational());
    return Real(a.value() * b.value());
  }
  friend Real operator/(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) {
      require(b.rational() != 0, "Real: division by zero");
      return Real(a.rational() / b.rational());
    }
    return Real(a.value() / b.value());
  }

  // Same-kind equality: exact values compare exactly, doubles bitwise.
  friend bool operator==(const Real& a, const Real& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.rational() == b.rational();
    return std::get<double>(a.value_) == std::get<double>(b.value_);
  }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

  std::string describe() const {
    if (is_exact()) {
      return rational_to_string(rational()) + " (~" + compact_double(value()) + ")";
    }
    return compact_double(value());
  }

 private:
  std::variant<Rational, double> value_;
};

}  // namespace slplab
