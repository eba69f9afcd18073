#pragma once

#include <mpfr.h>

#include <string>

#include "cwforest/rational.hpp"

namespace cwforest {

/// Certified interval [lo, hi] of precision-P binary floats. Every operation
/// rounds lo toward -infinity and hi toward +infinity, so the exact quantity
/// being tracked stays inside the interval through any sequence of supported
/// operations. Endpoints are dyadic and can be read back exactly.
class Enclosure {
 public:
  static constexpr int kMinPrecisionBits = 16;

  /// [0, 0] at the given precision.
  explicit Enclosure(int precision_bits);

  /// Tightest precision-P interval around an exact rational.
  Enclosure(const Rational& x, int precision_bits);

  Enclosure(const Enclosure& other);
  Enclosure(Enclosure&& other) noexcept;
  Enclosure& operator=(const Enclosure& other);
  Enclosure& operator=(Enclosure&& other) noexcept;
  ~Enclosure();

  int precision_bits() const { return static_cast<int>(mpfr_get_prec(lo_)); }

  void add(const Rational& x);
  void add(const mpq_class& x);
  void add(const Enclosure& other);
  void add_integer(const mpz_class& k);
  /// Outward difference: lo - other.hi down, hi - other.lo up.
  void subtract(const Enclosure& other);
  /// Multiplication by 2^e; exact at any precision.
  void scale_pow2(int e);
  /// Multiplication by a nonnegative integer, rounded outward.
  void scale_int(const mpz_class& k);

  static Enclosure sum(const Enclosure& a, const Enclosure& b);
  static Enclosure difference(const Enclosure& a, const Enclosure& b);

  /// lo <= x <= hi, compared exactly.
  bool contains(const Rational& x) const;

  /// hi < x, compared exactly: certifies that the tracked value is below x.
  bool certainly_below(const Rational& x) const;
  /// hi < other.lo: certifies the tracked value is below other's.
  bool certainly_below(const Enclosure& other) const;
  /// lo > 0.
  bool certainly_positive() const;

  /// Exact endpoint values (the endpoints are dyadic rationals). Returned as
  /// raw mpq because an endpoint may be negative, e.g. after subtraction.
  mpq_class lo_exact() const;
  mpq_class hi_exact() const;

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  /// Decimal endpoint strings with directed rounding (lo down, hi up), in
  /// scientific notation with `digits` significant digits.
  std::string lo_str(int digits = 42) const;
  std::string hi_str(int digits = 42) const;

  /// Raw endpoint access for module-internal construction. Callers must
  /// preserve the lo <= tracked value <= hi discipline.
  mpfr_ptr lo_ptr() { return lo_; }
  mpfr_ptr hi_ptr() { return hi_; }
  mpfr_srcptr lo_ptr() const { return lo_; }
  mpfr_srcptr hi_ptr() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
  bool initialized_ = false;  // false only after being moved from
};

}  // namespace cwforest
