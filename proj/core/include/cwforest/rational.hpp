#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <utility>

#include "cwforest/errors.hpp"

namespace cwforest {

/// Exact nonnegative rational, stored reduced with positive denominator.
/// Zero is 0/1. Negative values are rejected everywhere: the domain of the
/// tree operations is the positive rationals together with 0.
class Rational {
 public:
  /// Zero.
  Rational() : q_(0) {}

  /// The integer `value`.
  explicit Rational(unsigned long value) : q_(value) {}
  explicit Rational(const mpz_class& value);

  /// numerator/denominator, reduced on construction.
  Rational(long numerator, long denominator);
  Rational(const mpz_class& numerator, const mpz_class& denominator);

  /// Parses "a/b" or a bare integer "a". Surrounding whitespace is allowed,
  /// signs and embedded spaces are not.
  static Rational parse(std::string_view text);

  /// Wraps a fraction the caller guarantees is already reduced, with
  /// n >= 0 and d >= 1. Skips the gcd; used on hot paths where reducedness
  /// is an invariant of the producing computation.
  static Rational from_reduced(mpz_class n, mpz_class d);

  /// Canonicalizes and sign-checks an mpq produced by arbitrary arithmetic.
  static Rational from_mpq(mpq_class q);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& mpq() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  /// Integer part (floor).
  mpz_class floor() const;

  /// (floor, fractional part); the fractional part lies in [0, 1).
  std::pair<mpz_class, Rational> split() const;

  /// 1/x. Error on zero.
  Rational reciprocal() const;

  /// "num/den", integers included ("3/1").
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  /// Error if the result would be negative.
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Error on zero divisor.
  friend Rational operator/(const Rational& a, const Rational& b);

  std::strong_ordering operator<=>(const Rational& other) const {
    const int c = cmp(q_, other.q_);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }
  bool operator==(const Rational& other) const { return cmp(q_, other.q_) == 0; }

 private:
  struct reduced_tag {};
  Rational(mpq_class q, reduced_tag) : q_(std::move(q)) {}

  mpq_class q_;
};

}  // namespace cwforest
