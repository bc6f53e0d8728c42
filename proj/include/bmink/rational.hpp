// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bmink {

/// Exact rational number in canonical form (reduced, positive denominator).
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Exact value of a finite double (every binary64 is a dyadic rational).
  static Rational from_double(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite double");
    return Rational(mpq_class(d));
  }

  /// Parses "p", "p/q", "-p/q" or a decimal literal such as "0.01" or "-1.5e-3".
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.find_first_of(".eE") != std::string::npos) return parse_decimal(s);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    q.canonicalize();
    return Rational(q);
  }

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  double to_double() const { return q_.get_d(); }
  std::string str() const { return q_.get_str(10); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational parse_decimal(const std::string& s) {
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) {
      try {
        exp10 = std::stol(s.substr(epos + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad decimal literal: " + s);
      }
    }
    bool neg = false;
    std::size_t i = 0;
    if (i < mant.size() && (mant[i] == '-' || mant[i] == '+')) neg = mant[i++] == '-';
    std::string digits;
    long frac = 0;
    bool seen_dot = false;
    for (; i < mant.size(); ++i) {
      char c = mant[i];
      if (c == '.' && !seen_dot) {
        seen_dot = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_dot) ++frac;
      } else {
        throw std::invalid_argument("bad decimal literal: " + s);
      }
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal literal: " + s);
    mpz_class n(digits, 10);
    long shift = exp10 - frac;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    mpq_class q = shift < 0 ? mpq_class(n, p10) : mpq_class(n * p10);
    q.canonicalize();
    if (neg) q = -q;
    return Rational(q);
  }

  mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// r^k for integer k >= 0.
inline Rational pow(const Rational& r, unsigned k) {
  Rational out(1);
  for (unsigned i = 0; i < k; ++i) out *= r;
  return out;
}

}  // namespace bmink

template <>
struct std::hash<bmink::Rational> {
  std::size_t operator()(const bmink::Rational& r) const {
    return std::hash<std::string>{}(r.str());
  }
};
