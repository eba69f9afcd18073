#include "cwforest/tree.hpp"

#include <algorithm>

namespace cwforest {

TreeParams::TreeParams(unsigned long u_, unsigned long v_) : u(u_), v(v_) {
  if (u == 0 || v == 0) throw DomainError("tree: u and v must be >= 1");
}

TreePath TreePath::parse(std::string_view text) {
  std::vector<Step> steps;
  steps.reserve(text.size());
  for (const char c : text) {
    if (c == 'L') {
      steps.push_back(Step::Left);
    } else if (c == 'R') {
      steps.push_back(Step::Right);
    } else {
      throw ParseError(std::string("path: expected only 'L' and 'R', got '") + c + "'");
    }
  }
  return TreePath(std::move(steps));
}

std::string TreePath::str() const {
  std::string out;
  out.reserve(steps_.size());
  for (const Step s : steps_) out += s == Step::Left ? 'L' : 'R';
  return out;
}

namespace {

void require_positive(const Rational& x, const char* what) {
  if (x.is_zero()) throw DomainError(std::string(what) + ": value must be positive");
}

}  // namespace

ChildPair children(const Rational& x, const TreeParams& params) {
  require_positive(x, "children");
  const mpz_class& a = x.num();
  const mpz_class& b = x.den();
  // gcd(a, u*a + b) = gcd(a, b) = 1 and likewise on the right, so both
  // children are already reduced.
  mpz_class left_den, right_num;
  mpz_mul_ui(left_den.get_mpz_t(), a.get_mpz_t(), params.u);
  left_den += b;
  mpz_mul_ui(right_num.get_mpz_t(), b.get_mpz_t(), params.v);
  right_num += a;
  return {Rational::from_reduced(a, std::move(left_den)),
          Rational::from_reduced(std::move(right_num), b)};
}

std::pair<ContinuedFraction, ContinuedFraction> children_cf(const ContinuedFraction& x,
                                                            const TreeParams& params) {
  if (!x.is_canonical()) throw DomainError("children_cf: input must be canonical");
  if (x.size() == 1 && sgn(x[0]) == 0) throw DomainError("children_cf: value must be positive");

  const auto& c = x.coeffs();
  // Right child is x + v: only the integer part moves.
  std::vector<mpz_class> right = c;
  right[0] += params.v;

  // Left child is 1/(u + 1/x): for x >= 1 that inserts [0, u] in front; for
  // x < 1 the leading 0 cancels and u lands on the next coefficient.
  std::vector<mpz_class> left;
  if (sgn(c[0]) != 0) {
    left.reserve(c.size() + 2);
    left.emplace_back(0);
    left.emplace_back(params.u);
    left.insert(left.end(), c.begin(), c.end());
  } else {
    left = c;
    left[1] += params.u;
  }

  return {ContinuedFraction::from_coeffs(std::move(left)).canonicalized(),
          ContinuedFraction::from_coeffs(std::move(right)).canonicalized()};
}

std::optional<Rational> parent(const Rational& x, const TreeParams& params) {
  require_positive(x, "parent");
  const mpz_class& a = x.num();
  const mpz_class& b = x.den();

  mpz_class vb;
  mpz_mul_ui(vb.get_mpz_t(), b.get_mpz_t(), params.v);
  if (a > vb) {
    // x > v: right child of x - v.
    return Rational::from_reduced(a - vb, b);
  }

  mpz_class ua;
  mpz_mul_ui(ua.get_mpz_t(), a.get_mpz_t(), params.u);
  if (ua < b) {
    // x < 1/u: left child of a/(b - u*a).
    return Rational::from_reduced(a, b - ua);
  }

  return std::nullopt;
}

bool is_orphan(const Rational& x, const TreeParams& params) {
  require_positive(x, "is_orphan");
  const mpz_class& a = x.num();
  const mpz_class& b = x.den();
  mpz_class t;
  mpz_mul_ui(t.get_mpz_t(), a.get_mpz_t(), params.u);
  if (t < b) return false;  // x < 1/u
  mpz_mul_ui(t.get_mpz_t(), b.get_mpz_t(), params.v);
  return a <= t;  // x <= v
}

Location locate(const Rational& x, const TreeParams& params) {
  require_positive(x, "locate");
  Rational cur = x;
  std::vector<Step> upward;
  mpz_class weight = cur.num() + cur.den();
  mpz_class vb;
  while (true) {
    std::optional<Rational> up = parent(cur, params);
    if (!up) break;
    // Which child was cur? Right children exceed v.
    mpz_mul_ui(vb.get_mpz_t(), cur.den().get_mpz_t(), params.v);
    upward.push_back(cur.num() > vb ? Step::Right : Step::Left);
    cur = std::move(*up);
    mpz_class next_weight = cur.num() + cur.den();
    if (next_weight >= weight) {
      throw Error("locate: parent step failed to shrink numerator + denominator");
    }
    mpz_swap(weight.get_mpz_t(), next_weight.get_mpz_t());
  }
  if (!is_orphan(cur, params)) {
    throw Error("locate: walk stopped on a non-root value " + cur.str());
  }
  std::reverse(upward.begin(), upward.end());
  return Location{std::move(cur), TreePath(std::move(upward))};
}

Rational vertex_at_path(const Rational& root, const TreePath& path, const TreeParams& params) {
  require_positive(root, "vertex_at_path");
  Rational cur = root;
  for (const Step s : path) {
    ChildPair c = children(cur, params);
    cur = s == Step::Left ? std::move(c.left) : std::move(c.right);
  }
  return cur;
}

namespace detail {

std::optional<mpz_class> descent_depth(const ContinuedFraction& below, const ContinuedFraction& above,
                                       const TreeParams& params) {
  const auto& p = below.coeffs();
  const auto& q = above.coeffs();
  const std::size_t s = below.last_index();
  const std::size_t r = above.last_index();

  // (a) the deeper sequence is longer by an even amount.
  if (s < r || (s - r) % 2 != 0) return std::nullopt;
  const std::size_t off = s - r;

  // (b) leading coefficients alternate between multiples of v and of u.
  for (std::size_t j = 0; j < off; ++j) {
    const unsigned long m = j % 2 == 0 ? params.v : params.u;
    if (!mpz_divisible_ui_p(p[j].get_mpz_t(), m)) return std::nullopt;
  }

  // (c) the tail matches exactly from index 2 of the upper sequence on.
  for (std::size_t i = 2; i <= r; ++i) {
    if (p[off + i] != q[i]) return std::nullopt;
  }

  // (d) the two crossover coefficients match up to a multiple of v or u.
  if (sgn(q[0]) != 0) {
    if (p[off] < q[0]) return std::nullopt;
    const mpz_class d0 = p[off] - q[0];
    if (!mpz_divisible_ui_p(d0.get_mpz_t(), params.v)) return std::nullopt;
    if (r >= 1 && p[off + 1] != q[1]) return std::nullopt;
  } else {
    // q0 == 0 forces r >= 1 for a positive value, so q1 exists.
    if (!mpz_divisible_ui_p(p[off].get_mpz_t(), params.v)) return std::nullopt;
    if (p[off + 1] < q[1]) return std::nullopt;
    const mpz_class d1 = p[off + 1] - q[1];
    if (!mpz_divisible_ui_p(d1.get_mpz_t(), params.u)) return std::nullopt;
  }

  // Depth: v-weighted even positions plus u-weighted odd positions. Both
  // sums are divisible by construction once the conditions above hold.
  mpz_class v_sum(0), u_sum(0);
  for (std::size_t j = 0; j < off; ++j) {
    (j % 2 == 0 ? v_sum : u_sum) += p[j];
  }
  for (std::size_t i = 0; i <= r; ++i) {
    (i % 2 == 0 ? v_sum : u_sum) += p[off + i] - q[i];
  }
  mpz_class n, rem;
  mpz_fdiv_qr_ui(n.get_mpz_t(), rem.get_mpz_t(), v_sum.get_mpz_t(), params.v);
  if (sgn(rem) != 0) throw Error("descent_depth: v-sum not divisible");
  mpz_class n_u;
  mpz_fdiv_qr_ui(n_u.get_mpz_t(), rem.get_mpz_t(), u_sum.get_mpz_t(), params.u);
  if (sgn(rem) != 0) throw Error("descent_depth: u-sum not divisible");
  n += n_u;
  return n;
}

std::vector<ContinuedFraction> representations(const Rational& x) {
  require_positive(x, "representations");
  ContinuedFraction short_rep = ContinuedFraction::encode(x);
  ContinuedFraction long_rep = short_rep.long_form();
  return {std::move(short_rep), std::move(long_rep)};
}

}  // namespace detail

namespace {

std::optional<mpz_class> descent_depth_any(const Rational& root_value, const Rational& query,
                                           const TreeParams& params) {
  const auto above = detail::representations(root_value);
  const auto below = detail::representations(query);
  for (const ContinuedFraction& b : below) {
    for (const ContinuedFraction& a : above) {
      if (auto n = detail::descent_depth(b, a, params)) return n;
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_descendant(const Rational& root_value, const Rational& query, const TreeParams& params) {
  return descent_depth_any(root_value, query, params).has_value();
}

mpz_class depth_from_cf(const Rational& root_value, const Rational& query, const TreeParams& params) {
  auto n = descent_depth_any(root_value, query, params);
  if (!n) {
    throw DomainError("depth_from_cf: " + query.str() + " is not a descendant of " + root_value.str());
  }
  return std::move(*n);
}

}  // namespace cwforest
