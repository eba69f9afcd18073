#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cwforest/rational.hpp"

namespace cwforest {

/// Finite continued fraction [q0; q1, ..., qr] with q0 >= 0 and qi >= 1 for
/// i >= 1, representing q0 + 1/(q1 + 1/(... + 1/qr)).
///
/// The canonical (short) form additionally requires qr >= 2 whenever r >= 1;
/// under that rule 1 is [1] and 0 is [0], and encoding is a bijection. Every
/// positive rational also has exactly one other well-formed representation,
/// the long form, which ends in 1 and has one more coefficient.
class ContinuedFraction {
 public:
  /// Canonical encoding of x (plain Euclidean algorithm).
  static ContinuedFraction encode(const Rational& x);

  /// Wraps an explicit coefficient list, validating well-formedness.
  static ContinuedFraction from_coeffs(std::vector<mpz_class> coeffs);

  /// Parses "[q0,q1,...,qr]"; spaces around coefficients are tolerated.
  static ContinuedFraction parse(std::string_view text);

  /// Evaluates the coefficients back to a rational.
  Rational decode() const;

  bool is_canonical() const;

  /// The companion representation ending in 1: [q0,...,qr] becomes
  /// [q0,...,qr - 1, 1] (and [1] becomes [0, 1]). Error on [0], which has no
  /// second well-formed representation.
  ContinuedFraction long_form() const;

  /// Folds a trailing 1 back: requires size >= 2 and last coefficient 1.
  ContinuedFraction short_form() const;

  /// Canonical form of the same value, whichever form this is.
  ContinuedFraction canonicalized() const;

  /// Number of coefficients, r + 1.
  std::size_t size() const { return coeffs_.size(); }
  /// Index of the last coefficient, r.
  std::size_t last_index() const { return coeffs_.size() - 1; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& operator[](std::size_t i) const { return coeffs_[i]; }

  /// "[q0,q1,...,qr]" with no spaces.
  std::string str() const;

  /// Coefficient-sequence equality (not value equality: [3] != [2,1] here).
  bool operator==(const ContinuedFraction& other) const = default;

  /// Value order decided from coefficients alone, without decoding: after
  /// canonicalizing both sides, the first differing coefficient decides, with
  /// the direction flipping at odd indices; a proper prefix compares by the
  /// parity of its last index (less if even, greater if odd).
  static std::strong_ordering compare(const ContinuedFraction& a, const ContinuedFraction& b);

  /// Upper bound on |decode(a) - decode(b)| read off the shared coefficient
  /// prefix: the product of 1/p_j^2 over j = 1..k, where k is the last index
  /// on which the two sequences agree as given (no canonicalization).
  /// Requires a != b as sequences and a[0] == b[0].
  static Rational prefix_difference_bound(const ContinuedFraction& a, const ContinuedFraction& b);

 private:
  struct unchecked_tag {};
  ContinuedFraction(std::vector<mpz_class> coeffs, unchecked_tag) : coeffs_(std::move(coeffs)) {}

  std::vector<mpz_class> coeffs_;
};

/// Index of the last coefficient of the canonical form of x ("depth" of x as
/// a continued fraction); 0 exactly when x is a positive integer. Error on 0.
long long cf_length(const Rational& x);

namespace detail {

/// cf_length on a raw reduced fraction, avoiding Rational round-trips on hot
/// paths. Requires num >= 1, den >= 1, gcd(num, den) == 1.
long long cf_length_raw(mpz_srcptr num, mpz_srcptr den);

}  // namespace detail

}  // namespace cwforest
