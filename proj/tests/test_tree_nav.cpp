/// @file test_tree_nav.cpp
/// @brief Property-based tests for forest navigation: children, parents,
///        locate/walk round trips, the partition of the positive rationals,
///        and descendant/depth decisions made from coefficient structure.

#include <cwforest/contfrac.hpp>
#include <cwforest/errors.hpp>
#include <cwforest/rational.hpp>
#include <cwforest/tree.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <optional>
#include <random>
#include <vector>

using cwforest::ContinuedFraction;
using cwforest::DomainError;
using cwforest::Location;
using cwforest::Rational;
using cwforest::Step;
using cwforest::TreeParams;
using cwforest::TreePath;

namespace {

/// @brief Number of random iterations per property test.
constexpr size_t kIterations = 500;

/// @brief Iterations for the cheap one-step child/parent identities.
constexpr size_t kStepIterations = 10000;

/// @brief Parameter pairs exercised by most sweeps.
const TreeParams kParamsList[] = {TreeParams(1, 1), TreeParams(1, 2),
                                  TreeParams(2, 1), TreeParams(2, 3)};

class TreeNavPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{20240817};

  Rational randomPositive(long max_entry) {
    std::uniform_int_distribution<long> entry(1, max_entry);
    return Rational(entry(rng_), entry(rng_));
  }

  TreeParams randomParams() {
    std::uniform_int_distribution<int> pick(0, 3);
    return kParamsList[pick(rng_)];
  }
};

/// @brief Ancestor-chain oracle: walk parents from `query` upward and report
///        whether `target` shows up (a vertex counts as its own ancestor),
///        together with the number of steps taken to reach it.
std::optional<long> chainDepthOracle(const Rational& target,
                                     const Rational& query,
                                     const TreeParams& params) {
  Rational cur = query;
  long steps = 0;
  while (true) {
    if (cur == target) return steps;
    std::optional<Rational> up = cwforest::parent(cur, params);
    if (!up) return std::nullopt;
    cur = *up;
    ++steps;
  }
}

}  // namespace

// ============================================================================
// Children and parents
// ============================================================================

TEST(TreeNavBasicTest, ChildrenWorkedValues) {
  auto c11 = cwforest::children(Rational(1, 2), TreeParams(1, 1));
  EXPECT_EQ(c11.left, Rational(1, 3));
  EXPECT_EQ(c11.right, Rational(3, 2));

  auto c21 = cwforest::children(Rational(3, 2), TreeParams(2, 1));
  EXPECT_EQ(c21.left, Rational(3, 8));
  EXPECT_EQ(c21.right, Rational(5, 2));
}

TEST_F(TreeNavPropertyTest, ChildRangesAreDisjoint) {
  // Property: left child < 1/u and right child > v, so the two child ranges
  // never meet each other or the root interval [1/u, v].
  for (size_t i = 0; i < kStepIterations; ++i) {
    TreeParams params = randomParams();
    Rational x = randomPositive(100000);
    auto [left, right] = cwforest::children(x, params);
    Rational lo(1, static_cast<long>(params.u));
    Rational hi(static_cast<long>(params.v), 1);
    EXPECT_LT(left, lo) << "Left child in root range for x=" << x.str();
    EXPECT_GT(right, hi) << "Right child in root range for x=" << x.str();
  }
}

TEST_F(TreeNavPropertyTest, ParentInvertsChildren) {
  // Property: parent(left(x)) == x and parent(right(x)) == x.
  for (size_t i = 0; i < kStepIterations; ++i) {
    TreeParams params = randomParams();
    Rational x = randomPositive(100000);
    auto [left, right] = cwforest::children(x, params);
    auto pl = cwforest::parent(left, params);
    auto pr = cwforest::parent(right, params);
    ASSERT_TRUE(pl.has_value());
    ASSERT_TRUE(pr.has_value());
    EXPECT_EQ(*pl, x) << "Failed for left child of " << x.str();
    EXPECT_EQ(*pr, x) << "Failed for right child of " << x.str();
  }
}

TEST(TreeNavBasicTest, RootsHaveNoParent) {
  // Everything in the closed interval [1/u, v] is a root.
  TreeParams p23(2, 3);
  EXPECT_FALSE(cwforest::parent(Rational(1, 2), p23).has_value());
  EXPECT_FALSE(cwforest::parent(Rational(3, 1), p23).has_value());
  EXPECT_FALSE(cwforest::parent(Rational(7, 4), p23).has_value());
  EXPECT_TRUE(cwforest::is_orphan(Rational(1, 2), p23));
  EXPECT_FALSE(cwforest::is_orphan(Rational(1, 3), p23));
  EXPECT_FALSE(cwforest::is_orphan(Rational(7, 2), p23));

  TreeParams p11(1, 1);
  EXPECT_TRUE(cwforest::is_orphan(Rational(1, 1), p11));
  EXPECT_FALSE(cwforest::is_orphan(Rational(2, 3), p11));
}

TEST(TreeNavBasicTest, ChildrenOfReducedStayReduced) {
  // The child formulas never need a gcd step.
  TreeParams params(2, 3);
  Rational x(7, 5);
  auto [left, right] = cwforest::children(x, params);
  EXPECT_EQ(left, Rational(7, 19));
  EXPECT_EQ(right, Rational(22, 5));
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), left.num().get_mpz_t(), left.den().get_mpz_t());
  EXPECT_EQ(g, 1);
}

// ============================================================================
// Paths, locate, and the forest partition
// ============================================================================

TEST(TreeNavBasicTest, PathParseAndPrint) {
  TreePath p = TreePath::parse("RLLR");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.str(), "RLLR");
  EXPECT_EQ(TreePath::parse("").str(), "");
  EXPECT_THROW(TreePath::parse("RLX"), cwforest::ParseError);
}

TEST(TreeNavBasicTest, LocateWorkedValues) {
  TreeParams p11(1, 1);
  Location loc = cwforest::locate(Rational(7, 5), p11);
  EXPECT_EQ(loc.root, Rational(1, 1));
  EXPECT_EQ(loc.path.str(), "RLLR");
  EXPECT_EQ(loc.depth(), 4u);

  Location loc2 = cwforest::locate(Rational(5, 2), p11);
  EXPECT_EQ(loc2.root, Rational(1, 1));
  EXPECT_EQ(loc2.path.str(), "LRR");
  EXPECT_EQ(loc2.depth(), 3u);

  Location self = cwforest::locate(Rational(1, 1), p11);
  EXPECT_EQ(self.root, Rational(1, 1));
  EXPECT_TRUE(self.path.empty());
}

TEST(TreeNavBasicTest, VertexAtPathWorkedValues) {
  TreeParams p11(1, 1);
  EXPECT_EQ(cwforest::vertex_at_path(Rational(1, 1), TreePath::parse("LL"), p11),
            Rational(1, 3));
  EXPECT_EQ(cwforest::vertex_at_path(Rational(1, 1), TreePath(), p11),
            Rational(1, 1));
}

TEST(TreeNavExhaustiveTest, EverySmallRationalLocatesIntoThePartition) {
  // Property: each reduced a/b lands on exactly one root in [1/u, v], the
  // located path walks back down to the value, and depth 0 exactly
  // characterizes the roots themselves.
  for (const TreeParams& params : {TreeParams(1, 1), TreeParams(2, 3)}) {
    for (long a = 1; a <= 25; ++a) {
      for (long b = 1; b <= 25; ++b) {
        if (std::gcd(a, b) != 1) continue;
        Rational x(a, b);
        Location loc = cwforest::locate(x, params);
        ASSERT_TRUE(cwforest::is_orphan(loc.root, params))
            << x.str() << " located to non-root " << loc.root.str();
        ASSERT_EQ(cwforest::vertex_at_path(loc.root, loc.path, params), x)
            << "Path does not lead back to " << x.str();
        ASSERT_EQ(loc.depth() == 0, cwforest::is_orphan(x, params));
        if (loc.depth() == 0) {
          ASSERT_EQ(loc.root, x);
        }
      }
    }
  }
}

TEST_F(TreeNavPropertyTest, LocateRoundTripsOnRandomValues) {
  // Property: vertex_at_path(locate(x)) == x with a root in [1/u, v].
  for (size_t i = 0; i < 2000; ++i) {
    TreeParams params = randomParams();
    Rational x = randomPositive(1500);
    Location loc = cwforest::locate(x, params);
    Rational lo(1, static_cast<long>(params.u));
    Rational hi(static_cast<long>(params.v), 1);
    EXPECT_GE(loc.root, lo);
    EXPECT_LE(loc.root, hi);
    EXPECT_EQ(cwforest::vertex_at_path(loc.root, loc.path, params), x);
  }
}

// ============================================================================
// Descendant and depth decisions from coefficients
// ============================================================================

TEST(TreeNavBasicTest, DescendantWorkedValues) {
  TreeParams p11(1, 1);
  EXPECT_TRUE(cwforest::is_descendant(Rational(1, 1), Rational(3, 5), p11));
  EXPECT_FALSE(cwforest::is_descendant(Rational(2, 1), Rational(1, 1), p11));
  EXPECT_EQ(cwforest::depth_from_cf(Rational(1, 1), Rational(3, 5), p11), 3);
  EXPECT_EQ(cwforest::depth_from_cf(Rational(1, 1), Rational(2, 1), p11), 1);
  EXPECT_EQ(cwforest::depth_from_cf(Rational(3, 5), Rational(3, 5), p11), 0);
  EXPECT_THROW(cwforest::depth_from_cf(Rational(2, 1), Rational(1, 1), p11),
               DomainError);
}

TEST(TreeNavExhaustiveTest, DescendantAndDepthMatchChainOracle) {
  // Property: for every vertex at depth <= 6 under roots 1/u, 1, and v, the
  // coefficient-based descendant test accepts it and reports the exact
  // depth, in agreement with the ancestor-chain oracle.
  constexpr int kMaxDepth = 6;
  for (const TreeParams& params : {TreeParams(1, 1), TreeParams(1, 2),
                                   TreeParams(2, 3)}) {
    std::vector<Rational> roots = {Rational(1, static_cast<long>(params.u)),
                                   Rational(1, 1),
                                   Rational(static_cast<long>(params.v), 1)};
    for (const Rational& root : roots) {
      std::vector<Rational> level = {root};
      for (int d = 0; d <= kMaxDepth; ++d) {
        std::vector<Rational> next;
        next.reserve(level.size() * 2);
        for (const Rational& x : level) {
          ASSERT_TRUE(cwforest::is_descendant(root, x, params))
              << "Rejected " << x.str() << " at depth " << d << " under "
              << root.str();
          ASSERT_EQ(cwforest::depth_from_cf(root, x, params), d)
              << "Wrong depth for " << x.str() << " under " << root.str();
          auto oracle = chainDepthOracle(root, x, params);
          ASSERT_TRUE(oracle.has_value());
          ASSERT_EQ(*oracle, d);
          if (d < kMaxDepth) {
            auto [left, right] = cwforest::children(x, params);
            next.push_back(left);
            next.push_back(right);
          }
        }
        level = std::move(next);
      }
    }
  }
}

TEST_F(TreeNavPropertyTest, DescendantAgreesWithChainOracleOnRandomPairs) {
  // Property: on arbitrary pairs (mostly non-descendants), the coefficient
  // test and the ancestor-chain oracle give the same verdict.
  size_t negatives = 0;
  for (size_t i = 0; i < 1000; ++i) {
    TreeParams params = randomParams();
    Rational target = randomPositive(400);
    Rational query = randomPositive(400);
    auto oracle = chainDepthOracle(target, query, params);
    bool expected = oracle.has_value();
    ASSERT_EQ(cwforest::is_descendant(target, query, params), expected)
        << "Mismatch for target=" << target.str()
        << ", query=" << query.str() << " under (" << params.u << ","
        << params.v << ")";
    if (expected) {
      ASSERT_EQ(cwforest::depth_from_cf(target, query, params), *oracle);
    } else {
      ++negatives;
      ASSERT_THROW(cwforest::depth_from_cf(target, query, params),
                   DomainError);
    }
  }
  // The sweep is only meaningful if it actually saw non-descendant pairs.
  EXPECT_GT(negatives, 800u);
}

TEST_F(TreeNavPropertyTest, DepthMatchesLocateDifference) {
  // Property: depth below one's own located root equals the path length.
  for (size_t i = 0; i < kIterations; ++i) {
    TreeParams params = randomParams();
    Rational x = randomPositive(1000);
    Location loc = cwforest::locate(x, params);
    EXPECT_EQ(cwforest::depth_from_cf(loc.root, x, params),
              static_cast<long>(loc.depth()));
  }
}

// ============================================================================
// Children on coefficient sequences
// ============================================================================

TEST(TreeNavBasicTest, ChildrenCfWorkedValues) {
  TreeParams p11(1, 1);
  auto [l1, r1] = cwforest::children_cf(ContinuedFraction::parse("[0, 2]"), p11);
  EXPECT_EQ(l1.str(), "[0,3]");
  EXPECT_EQ(r1.str(), "[1,2]");

  TreeParams p21(2, 1);
  auto [l2, r2] = cwforest::children_cf(ContinuedFraction::parse("[1, 2]"), p21);
  EXPECT_EQ(l2.str(), "[0,2,1,2]");
  EXPECT_EQ(r2.str(), "[2,2]");

  auto [l3, r3] = cwforest::children_cf(ContinuedFraction::parse("[1]"), p11);
  EXPECT_EQ(l3.str(), "[0,2]");
  EXPECT_EQ(r3.str(), "[2]");
}

TEST_F(TreeNavPropertyTest, ChildrenCfCommutesWithDecode) {
  // Property: children_cf(encode(x)) decodes to children(x), and the
  // results are canonical.
  for (size_t i = 0; i < kStepIterations; ++i) {
    TreeParams params = randomParams();
    Rational x = randomPositive(100000);
    auto [left, right] = cwforest::children(x, params);
    auto [lcf, rcf] = cwforest::children_cf(ContinuedFraction::encode(x), params);
    ASSERT_TRUE(lcf.is_canonical());
    ASSERT_TRUE(rcf.is_canonical());
    ASSERT_EQ(lcf.decode(), left) << "Left mismatch for " << x.str();
    ASSERT_EQ(rcf.decode(), right) << "Right mismatch for " << x.str();
  }
}

TEST(TreeNavBasicTest, ChildrenCfRequiresCanonicalInput) {
  TreeParams p11(1, 1);
  ContinuedFraction long_form = ContinuedFraction::parse("[0, 1, 1, 1, 1]");
  EXPECT_THROW(cwforest::children_cf(long_form, p11), DomainError);
  ContinuedFraction zero = ContinuedFraction::parse("[0]");
  EXPECT_THROW(cwforest::children_cf(zero, p11), DomainError);
}
