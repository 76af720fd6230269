#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace ffd {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar.
///
/// Thin value wrapper around boost's cpp_rational. The wrapper exists so the
/// type can be an Eigen scalar: Boost's `number<>` carries greedy converting
/// constructors that collide with Eigen's scalar promotion.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : v_(value) {}  // NOLINT: implicit by intent
  Rational(long long num, long long den);
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const BigInt& value) : v_(value) {}

  BigInt numerator() const;
  BigInt denominator() const;
  double to_double() const;

  bool is_zero() const { return v_ == 0; }
  int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ == b.v_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  boost::multiprecision::cpp_rational v_;
};

Rational abs(const Rational& r);

/// Parses "p/q", an integer, or a finite decimal such as "0.25" (exactly).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Decimal rendering with `significant` significant digits ("%.6g"-style).
std::string to_decimal(const Rational& r, int significant = 6);

/// Fixed-point rendering with `places` digits after the point.
std::string to_fixed(const Rational& r, int places);

BigInt binomial(int n, int k);

}  // namespace ffd

namespace Eigen {
template <>
struct NumTraits<ffd::Rational> : GenericNumTraits<ffd::Rational> {
  using Real = ffd::Rational;
  using NonInteger = ffd::Rational;
  using Nested = ffd::Rational;
  using Literal = ffd::Rational;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
