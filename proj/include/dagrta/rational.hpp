#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dagrta {

/// Raised when a checked 64-bit rational operation would lose precision.
class RationalOverflow : public std::overflow_error {
 public:
  RationalOverflow() : std::overflow_error("rational arithmetic overflowed 64 bits") {}
};

/// Exact fraction over int64 with overflow detection. Denominator is always
/// positive and the fraction is kept in lowest terms. Integer-valued operands
/// take a fast path.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  bool is_zero() const { return num_ == 0; }

  std::int64_t floor() const {
    if (den_ == 1) return num_;
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return q;
  }
  std::int64_t ceil() const { return -Rational(-num_, den_).floor(); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) + b.num_, 1);
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 bd = b.den_ / g;
    const __int128 n = static_cast<__int128>(a.num_) * bd + static_cast<__int128>(b.num_) * (a.den_ / g);
    return from_wide(n, static_cast<__int128>(a.den_) * bd);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) * b.num_, 1);
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t d1 = g1 == 0 ? 1 : g1;
    const std::int64_t d2 = g2 == 0 ? 1 : g2;
    const __int128 n = static_cast<__int128>(a.num_ / d1) * (b.num_ / d2);
    const __int128 d = static_cast<__int128>(a.den_ / d2) * (b.den_ / d1);
    return from_wide(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    Rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
    return a * inv;
  }
  Rational operator-() const {
    if (num_ == INT64_MIN) throw RationalOverflow();
    Rational r = *this;
    r.num_ = -num_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

 private:
  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (d != 1) {
      __int128 a = n < 0 ? -n : n;
      __int128 b = d;
      while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
      }
      if (a > 1) {
        n /= a;
        d /= a;
      }
    }
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax) throw RationalOverflow();
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace dagrta
