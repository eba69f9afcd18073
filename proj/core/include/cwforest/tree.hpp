#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cwforest/contfrac.hpp"
#include "cwforest/rational.hpp"

namespace cwforest {

/// The parameter pair (u, v), both >= 1, defining one tree family: the
/// vertex a/b has left child a/(u*a + b) and right child (a + v*b)/b.
/// Left children are always < 1/u and right children always > v, so the
/// rationals in [1/u, v] are exactly the ones that appear as roots.
struct TreeParams {
  unsigned long u = 1;
  unsigned long v = 1;

  TreeParams() = default;
  TreeParams(unsigned long u_, unsigned long v_);

  bool operator==(const TreeParams&) const = default;
};

enum class Step : unsigned char { Left, Right };

/// Left/right walk from a root down to a vertex; its length is the vertex's
/// depth. Serialized as a string over {L, R}; the empty path is "".
class TreePath {
 public:
  TreePath() = default;
  explicit TreePath(std::vector<Step> steps) : steps_(std::move(steps)) {}

  static TreePath parse(std::string_view text);
  std::string str() const;

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  void push_back(Step s) { steps_.push_back(s); }
  auto begin() const { return steps_.begin(); }
  auto end() const { return steps_.end(); }
  const std::vector<Step>& steps() const { return steps_; }

  bool operator==(const TreePath&) const = default;

 private:
  std::vector<Step> steps_;
};

struct ChildPair {
  Rational left;
  Rational right;
};

/// Both children of x > 0. Children of a reduced fraction are reduced, so no
/// re-canonicalization happens here.
ChildPair children(const Rational& x, const TreeParams& params);

/// Children computed directly on canonical continued-fraction coefficients,
/// never touching the value: the right child prepends v to the integer part
/// and the left child extends the fraction by a u term. Results are
/// canonical.
std::pair<ContinuedFraction, ContinuedFraction> children_cf(const ContinuedFraction& x,
                                                            const TreeParams& params);

/// The parent of x, or nullopt when x is a root (x in [1/u, v]). A value
/// > v is a right child; a value < 1/u is a left child.
std::optional<Rational> parent(const Rational& x, const TreeParams& params);

/// x lies in the closed interval [1/u, v], i.e. starts its own tree.
bool is_orphan(const Rational& x, const TreeParams& params);

/// Root and downward path identifying x's position in the forest.
struct Location {
  Rational root;
  TreePath path;

  std::size_t depth() const { return path.size(); }
};

/// Walks parent steps from x up to its root. Each step strictly decreases
/// numerator + denominator, which is checked and guarantees termination.
Location locate(const Rational& x, const TreeParams& params);

/// Follows a left/right path down from `root`.
Rational vertex_at_path(const Rational& root, const TreePath& path, const TreeParams& params);

/// Whether `query` lies in the subtree rooted at `root_value` (a vertex is a
/// descendant of itself). Decided from continued-fraction structure alone;
/// both values must be positive.
bool is_descendant(const Rational& root_value, const Rational& query, const TreeParams& params);

/// Depth of `query` below `root_value`, derived from the coefficient
/// structure without walking the tree. Error if not a descendant.
mpz_class depth_from_cf(const Rational& root_value, const Rational& query, const TreeParams& params);

namespace detail {

/// Tests one concrete representation pair: does the coefficient sequence of
/// `below` descend from that of `above` under (u, v)? Returns the depth when
/// the structural conditions all hold, nullopt otherwise. Sequences are used
/// exactly as given; callers try short/long combinations.
std::optional<mpz_class> descent_depth(const ContinuedFraction& below, const ContinuedFraction& above,
                                       const TreeParams& params);

/// The well-formed representations of a positive x: canonical form plus the
/// long form ending in 1.
std::vector<ContinuedFraction> representations(const Rational& x);

}  // namespace detail

}  // namespace cwforest
