#include "ffd/rational.hpp"

#include <cctype>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ffd {

namespace bmp = boost::multiprecision;

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  // boost rejects a negative denominator
  v_ = den < 0 ? bmp::cpp_rational(-BigInt(num), -BigInt(den)) : bmp::cpp_rational(num, den);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  v_ = den < 0 ? bmp::cpp_rational(-num, -den) : bmp::cpp_rational(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

BigInt Rational::numerator() const { return bmp::numerator(v_); }
BigInt Rational::denominator() const { return bmp::denominator(v_); }
double Rational::to_double() const { return v_.convert_to<double>(); }

std::string Rational::str() const {
  const BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational parse_rational(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw bad();

  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw bad();
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw bad();
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
    // strip leading zeros: boost reads a leading 0 as an octal prefix
    std::size_t first = start;
    while (first + 1 < s.size() && s[first] == '0') ++first;
    BigInt v(std::string(s.substr(first)));
    return s[0] == '-' ? BigInt(-v) : v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    bool negative = !whole.empty() && whole[0] == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    digits += frac;
    BigInt scale = bmp::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt num = parse_int(digits);
    if (negative && num > 0) num = -num;
    return Rational(num, scale);
  }
  return Rational(parse_int(text));
}

std::string to_decimal(const Rational& r, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, r.to_double());
  return buf;
}

std::string to_fixed(const Rational& r, int places) {
  const BigInt scale = bmp::pow(BigInt(10), static_cast<unsigned>(places));
  BigInt num = r.numerator() * scale;
  const BigInt den = r.denominator();
  const bool negative = num < 0;
  if (negative) num = -num;
  BigInt q = (2 * num + den) / (2 * den);  // half away from zero
  std::string digits = q.str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places))
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace ffd
