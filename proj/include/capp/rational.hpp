#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace capp {

// Exact rational arithmetic over int64 numerator / positive denominator.
// All intermediates go through __int128 and overflow raises instead of
// wrapping; the values this toolkit handles are small.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) { assign(n, d); }

  static Rational from_string(const std::string& text);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  Rational operator-() const { return Rational(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                (__int128)a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                (__int128)a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // "n" for integers, "n/d" otherwise.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Terminating decimal when the denominator is 2^a*5^b, "n/d" otherwise.
  std::string to_decimal_string() const;

 private:
  static Rational make(__int128 n, __int128 d) {
    Rational r;
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void assign(long long n, long long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = make(n, d);
  }

  long long num_;
  long long den_;
};

inline std::string Rational::to_decimal_string() const {
  long long d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return to_string();
  if (den_ == 1) return std::to_string(num_);
  // Scale to 10^k with k = max(twos, fives).
  __int128 n = num_;
  int k = twos > fives ? twos : fives;
  for (int i = twos; i < k; ++i) n *= 2;
  for (int i = fives; i < k; ++i) n *= 5;
  bool neg = n < 0;
  if (neg) n = -n;
  std::string digits;
  if (n == 0) digits = "0";
  while (n > 0) { digits.insert(digits.begin(), char('0' + (int)(n % 10))); n /= 10; }
  while ((int)digits.size() <= k) digits.insert(digits.begin(), '0');
  digits.insert(digits.size() - k, ".");
  while (digits.back() == '0') digits.pop_back();
  if (digits.back() == '.') digits.pop_back();
  return (neg ? "-" : "") + digits;
}

inline Rational Rational::from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long n = std::stoll(text.substr(0, slash));
    long long d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad decimal literal: " + text);
    long long den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    bool neg = !whole.empty() && whole[0] == '-';
    long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    long long f = frac.empty() ? 0 : std::stoll(frac);
    Rational r = Rational(w < 0 ? -w : w) + Rational(f, den);
    return (neg || w < 0) ? -r : r;
  }
  return Rational(std::stoll(text));
}

}  // namespace capp
