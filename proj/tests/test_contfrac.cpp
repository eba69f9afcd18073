/// @file test_contfrac.cpp
/// @brief Property-based tests for continued-fraction coding of rationals.
/// @details Covers Euclid encoding, the short/long representation pair,
///          lexicographic-style ordering, and the shared-prefix distance
///          bound together with its divisibility-driven decay estimate.

#include <cwforest/contfrac.hpp>
#include <cwforest/errors.hpp>
#include <cwforest/rational.hpp>

#include <gtest/gtest.h>

#include <compare>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

using cwforest::ContinuedFraction;
using cwforest::DomainError;
using cwforest::ParseError;
using cwforest::Rational;

namespace {

/// @brief Number of random iterations per property test.
constexpr size_t kIterations = 500;

/// @brief Iterations for the shared-prefix distance-bound sweep.
constexpr size_t kBoundIterations = 10000;

/// @brief Absolute difference of two rationals as an exact mpq value.
mpq_class absDifference(const Rational& x, const Rational& y) {
  mpq_class d = x.mpq() - y.mpq();
  return d < 0 ? mpq_class(-d) : d;
}

class ContfracPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{20240817};

  /// @brief Random well-formed coefficient vector: q0 >= 0, later terms >= 1.
  std::vector<mpz_class> randomCoeffs(size_t min_len, size_t max_len,
                                      long max_coeff) {
    std::uniform_int_distribution<size_t> len(min_len, max_len);
    std::uniform_int_distribution<long> head(0, max_coeff - 1);
    std::uniform_int_distribution<long> tail(1, max_coeff);
    size_t n = len(rng_);
    std::vector<mpz_class> out;
    out.reserve(n);
    out.emplace_back(head(rng_));
    for (size_t i = 1; i < n; ++i) out.emplace_back(tail(rng_));
    return out;
  }
};

}  // namespace

// ============================================================================
// Encoding and decoding
// ============================================================================

TEST(ContfracBasicTest, KnownEncodings) {
  EXPECT_EQ(ContinuedFraction::encode(Rational(3, 5)).str(), "[0,1,1,2]");
  EXPECT_EQ(ContinuedFraction::encode(Rational(1, 1)).str(), "[1]");
  EXPECT_EQ(ContinuedFraction::encode(Rational(0, 1)).str(), "[0]");
  EXPECT_EQ(ContinuedFraction::encode(Rational(7, 2)).str(), "[3,2]");
  EXPECT_EQ(ContinuedFraction::encode(Rational(2, 3)).str(), "[0,1,2]");
}

TEST(ContfracBasicTest, LongFormDecodesToSameValue) {
  ContinuedFraction long_form = ContinuedFraction::parse("[0, 1, 1, 1, 1]");
  EXPECT_EQ(long_form.decode(), Rational(3, 5));
  EXPECT_FALSE(long_form.is_canonical());
  EXPECT_EQ(long_form.canonicalized().str(), "[0,1,1,2]");
}

TEST(ContfracExhaustiveTest, RoundTripAllSmallRationals) {
  // Property: decode(encode(q)) == q for every reduced a/b with a,b <= 200,
  // the encoding is canonical, and the long form decodes identically.
  for (long a = 1; a <= 200; ++a) {
    for (long b = 1; b <= 200; ++b) {
      if (std::gcd(a, b) != 1) continue;
      Rational q(a, b);
      ContinuedFraction cf = ContinuedFraction::encode(q);
      ASSERT_TRUE(cf.is_canonical()) << "Non-canonical for " << q.str();
      ASSERT_EQ(cf.decode(), q) << "Round trip failed for " << q.str();
      ContinuedFraction lf = cf.long_form();
      ASSERT_EQ(lf[lf.last_index()], 1);
      ASSERT_EQ(lf.decode(), q) << "Long form broken for " << q.str();
      ASSERT_EQ(lf.canonicalized(), cf);
    }
  }
}

TEST(ContfracBasicTest, ExactlyTwoRepresentationsOfOne) {
  ContinuedFraction one = ContinuedFraction::encode(Rational(1, 1));
  EXPECT_EQ(one.str(), "[1]");
  EXPECT_EQ(one.long_form().str(), "[0,1]");
  EXPECT_EQ(one.long_form().decode(), Rational(1, 1));
}

TEST_F(ContfracPropertyTest, ShortAndLongFormsAreTheOnlyTwo) {
  // Property: canonical and long forms differ in length by exactly one
  // term, and exactly one of the two has an even last index.
  for (size_t i = 0; i < kIterations; ++i) {
    std::uniform_int_distribution<long> entry(1, 100000);
    Rational q(entry(rng_), entry(rng_));
    ContinuedFraction cf = ContinuedFraction::encode(q);
    ContinuedFraction lf = cf.long_form();
    EXPECT_EQ(lf.size(), cf.size() + 1);
    EXPECT_EQ(lf.short_form(), cf);
    bool short_even = cf.last_index() % 2 == 0;
    bool long_even = lf.last_index() % 2 == 0;
    EXPECT_NE(short_even, long_even) << "Both parities equal for " << q.str();
  }
}

// ============================================================================
// Validation and parsing
// ============================================================================

TEST(ContfracBasicTest, FromCoeffsRejectsMalformedSequences) {
  EXPECT_THROW(ContinuedFraction::from_coeffs({}), DomainError);
  EXPECT_THROW(ContinuedFraction::from_coeffs({mpz_class(1), mpz_class(0)}),
               DomainError);
  EXPECT_THROW(ContinuedFraction::from_coeffs({mpz_class(-1)}), DomainError);
  EXPECT_NO_THROW(ContinuedFraction::from_coeffs({mpz_class(0)}));
}

TEST(ContfracBasicTest, ParseRejectsMalformedText) {
  EXPECT_THROW(ContinuedFraction::parse(""), ParseError);
  EXPECT_THROW(ContinuedFraction::parse("[]"), ParseError);
  EXPECT_THROW(ContinuedFraction::parse("[1, x]"), ParseError);
  EXPECT_THROW(ContinuedFraction::parse("1, 2"), ParseError);
  EXPECT_EQ(ContinuedFraction::parse("[ 0 , 1 , 2 ]").decode(),
            Rational(2, 3));
}

TEST_F(ContfracPropertyTest, ParseStrRoundTrip) {
  // Property: parse(str(cf)) == cf for random well-formed sequences.
  for (size_t i = 0; i < kIterations; ++i) {
    auto coeffs = randomCoeffs(1, 8, 9);
    ContinuedFraction cf = ContinuedFraction::from_coeffs(coeffs);
    EXPECT_EQ(ContinuedFraction::parse(cf.str()), cf);
  }
}

// ============================================================================
// Ordering
// ============================================================================

TEST(ContfracExhaustiveTest, CompareMatchesRationalOrder) {
  // Property: compare on coefficient sequences agrees with the order of the
  // decoded values for all reduced a/b with a,b <= 30, in every combination
  // of short/long representation on either side.
  std::vector<Rational> values;
  for (long a = 0; a <= 30; ++a) {
    for (long b = 1; b <= 30; ++b) {
      if (std::gcd(a == 0 ? b : a, b) != 1) continue;
      values.emplace_back(a, b);
      if (a == 0) break;  // Zero has a single reduced form.
    }
  }
  for (const Rational& x : values) {
    ContinuedFraction sx = ContinuedFraction::encode(x);
    std::vector<ContinuedFraction> xs = {sx};
    if (!x.is_zero()) xs.push_back(sx.long_form());
    for (const Rational& y : values) {
      ContinuedFraction sy = ContinuedFraction::encode(y);
      std::vector<ContinuedFraction> ys = {sy};
      if (!y.is_zero()) ys.push_back(sy.long_form());
      std::strong_ordering expected = x <=> y;
      for (const auto& cx : xs) {
        for (const auto& cy : ys) {
          ASSERT_TRUE(ContinuedFraction::compare(cx, cy) == expected)
              << "Failed for " << cx.str() << " vs " << cy.str();
        }
      }
    }
  }
}

TEST(ContfracBasicTest, ProperPrefixParityRule) {
  // A proper prefix is the smaller value exactly when its last index is even.
  ContinuedFraction a = ContinuedFraction::parse("[0, 2]");
  ContinuedFraction b = ContinuedFraction::parse("[0, 2, 3]");
  // Prefix [0, 2] has last index 1 (odd): prefix is larger.
  EXPECT_TRUE(ContinuedFraction::compare(a, b) == std::strong_ordering::greater);
  ContinuedFraction c = ContinuedFraction::parse("[2, 1, 3]");
  ContinuedFraction d = ContinuedFraction::parse("[2, 1, 3, 5]");
  // Prefix [2, 1, 3] has last index 2 (even): prefix is smaller.
  EXPECT_TRUE(ContinuedFraction::compare(c, d) == std::strong_ordering::less);
}

// ============================================================================
// Shared-prefix distance bound
// ============================================================================

TEST(ContfracBasicTest, PrefixBoundWorkedValues) {
  auto bound = [](const char* x, const char* y) {
    return ContinuedFraction::prefix_difference_bound(
        ContinuedFraction::parse(x), ContinuedFraction::parse(y));
  };
  EXPECT_EQ(bound("[0, 2]", "[0, 2, 3]"), Rational(1, 4));
  EXPECT_EQ(bound("[1, 2]", "[1, 3]"), Rational(1, 1));
  EXPECT_EQ(bound("[0, 2, 1, 2]", "[0, 2, 1, 4]"), Rational(1, 4));
}

TEST(ContfracBasicTest, PrefixBoundRejectsDegeneratePairs) {
  ContinuedFraction a = ContinuedFraction::parse("[0, 2]");
  ContinuedFraction b = ContinuedFraction::parse("[1, 2]");
  EXPECT_THROW(ContinuedFraction::prefix_difference_bound(a, a), DomainError);
  EXPECT_THROW(ContinuedFraction::prefix_difference_bound(a, b), DomainError);
}

TEST_F(ContfracPropertyTest, PrefixBoundDominatesActualDistance) {
  // Property: |decode(x) - decode(y)| <= prefix_difference_bound(x, y) for
  // random pairs sharing a leading coefficient.
  size_t checked = 0;
  while (checked < kBoundIterations) {
    auto shared = randomCoeffs(1, 6, 5);
    auto x = shared;
    auto y = shared;
    auto extend = [&](std::vector<mpz_class>& seq) {
      std::uniform_int_distribution<int> extra(0, 3);
      std::uniform_int_distribution<long> coeff(1, 5);
      int n = extra(rng_);
      for (int i = 0; i < n; ++i) seq.emplace_back(coeff(rng_));
    };
    extend(x);
    extend(y);
    if (x == y) continue;
    ContinuedFraction cx = ContinuedFraction::from_coeffs(x);
    ContinuedFraction cy = ContinuedFraction::from_coeffs(y);
    Rational bound = ContinuedFraction::prefix_difference_bound(cx, cy);
    mpq_class distance = absDifference(cx.decode(), cy.decode());
    ASSERT_LE(cmp(distance, bound.mpq()), 0)
        << "Bound violated for " << cx.str() << " vs " << cy.str();
    ++checked;
  }
}

TEST_F(ContfracPropertyTest, DivisibilityPatternForcesGeometricDecay) {
  // Property: when interior coefficients alternate between multiples of u
  // (odd positions) and v (even positions), the shared-prefix bound through
  // index k is at most u^(-2*ceil(k/2)) * v^(-2*floor(k/2)), which is at
  // most 2^(1-k) whenever u*v >= 2.
  const std::pair<unsigned, unsigned> grid[] = {{1, 2}, {2, 1}, {2, 2},
                                                {1, 3}, {3, 1}, {3, 2}};
  for (auto [u, v] : grid) {
    for (size_t i = 0; i < kIterations; ++i) {
      std::uniform_int_distribution<int> len(1, 7);
      std::uniform_int_distribution<long> mult(1, 3);
      int k = len(rng_);
      std::vector<mpz_class> shared;
      shared.emplace_back(mult(rng_) - 1);
      for (int j = 1; j <= k; ++j) {
        long factor = (j % 2 == 1) ? u : v;
        shared.emplace_back(mult(rng_) * factor);
      }
      std::vector<mpz_class> x = shared;
      std::vector<mpz_class> y = shared;
      x.emplace_back(2);
      y.emplace_back(3);
      Rational bound = ContinuedFraction::prefix_difference_bound(
          ContinuedFraction::from_coeffs(x), ContinuedFraction::from_coeffs(y));

      Rational pattern(1, 1);
      for (int j = 1; j <= k; ++j) {
        long factor = (j % 2 == 1) ? u : v;
        pattern = pattern / Rational(factor * factor, 1);
      }
      EXPECT_LE(bound, pattern)
          << "Pattern bound failed at (" << u << "," << v << "), k=" << k;
      if (u * v >= 2) {
        // 2^(1-k) as an exact rational.
        Rational dyadic =
            k >= 1 ? Rational(1, 1L << (k - 1)) : Rational(2, 1);
        EXPECT_LE(pattern, dyadic)
            << "Dyadic decay failed at (" << u << "," << v << "), k=" << k;
      }
    }
  }
}

// ============================================================================
// Coefficient-count statistic
// ============================================================================

TEST(ContfracBasicTest, CoefficientCountWorkedValues) {
  // cf_length reports the last index of the canonical form.
  EXPECT_EQ(cwforest::cf_length(Rational(2, 3)), 2);
  EXPECT_EQ(cwforest::cf_length(Rational(1, 1)), 0);
  EXPECT_EQ(cwforest::cf_length(Rational(3, 5)), 3);
  EXPECT_EQ(cwforest::cf_length(Rational(7, 1)), 0);
  EXPECT_EQ(cwforest::cf_length(Rational(1, 4)), 1);
  EXPECT_THROW(cwforest::cf_length(Rational(0, 1)), DomainError);
}

TEST_F(ContfracPropertyTest, CoefficientCountMatchesEncoding) {
  // Property: cf_length(q) == last index of encode(q).
  for (size_t i = 0; i < kIterations; ++i) {
    std::uniform_int_distribution<long> entry(1, 100000);
    Rational q(entry(rng_), entry(rng_));
    EXPECT_EQ(cwforest::cf_length(q),
              static_cast<long long>(ContinuedFraction::encode(q).last_index()));
  }
}
