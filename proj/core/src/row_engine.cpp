#include "cwforest/row_engine.hpp"

#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <utility>

namespace cwforest {

SumMode SumMode::exact(int report_precision_bits) {
  if (report_precision_bits < Enclosure::kMinPrecisionBits) {
    throw DomainError("sum mode: precision must be at least " +
                      std::to_string(Enclosure::kMinPrecisionBits) + " bits");
  }
  return SumMode{Kind::Exact, report_precision_bits};
}

SumMode SumMode::enclosure(int precision_bits) {
  SumMode m = exact(precision_bits);
  m.kind = Kind::Enclosure;
  return m;
}

namespace {

struct Ctx {
  unsigned long u = 1;
  unsigned long v = 1;
  std::size_t digit_budget = kDefaultDigitBudget;
};

// Child steps on raw mpq values. Children of a reduced fraction are reduced,
// so no canonicalization is needed; `out` must not alias `x`.
inline void left_child_mpq(const mpq_class& x, unsigned long u, mpq_class& out) {
  mpz_set(out.get_num_mpz_t(), x.get_num_mpz_t());
  mpz_mul_ui(out.get_den_mpz_t(), x.get_num_mpz_t(), u);
  mpz_add(out.get_den_mpz_t(), out.get_den_mpz_t(), x.get_den_mpz_t());
}

inline void right_child_mpq(const mpq_class& x, unsigned long v, mpq_class& out) {
  mpz_set(out.get_den_mpz_t(), x.get_den_mpz_t());
  mpz_mul_ui(out.get_num_mpz_t(), x.get_den_mpz_t(), v);
  mpz_add(out.get_num_mpz_t(), out.get_num_mpz_t(), x.get_num_mpz_t());
}

void check_budget(const mpq_class& q, std::size_t budget) {
  // A 64-bit limb holds just over 19 decimal digits, so this screen only
  // lets values anywhere near the budget reach the exact digit count.
  if (mpz_size(q.get_den_mpz_t()) * 20 < budget) return;
  const std::size_t digits = mpz_sizeinbase(q.get_den_mpz_t(), 10);
  if (digits > budget) {
    throw DigitBudgetError("exact row sum: denominator reached " + std::to_string(digits) +
                           " decimal digits, budget is " + std::to_string(budget));
  }
}

// Per-leaf observations shared by the exact and enclosure walks.
struct LeafStats {
  bool enabled = false;
  long long base_len = 0;
  unsigned long long count = 0;
  mpz_class int_part_sum{0};
  std::map<long long, unsigned long long> hist;
  mpz_class scratch;

  void observe(const mpq_class& x) {
    ++count;
    if (!enabled) return;
    mpz_fdiv_q(scratch.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    int_part_sum += scratch;
    ++hist[detail::cf_length_raw(x.get_num_mpz_t(), x.get_den_mpz_t()) - base_len];
  }
};

// Exact subtree-row sum, merged pairwise so denominators stay balanced. When
// `leaf_left_child` is set the leaves contribute their left children instead
// of themselves, which is what the incremental row recurrence needs.
mpq_class walk_exact(const mpq_class& x, int m, const Ctx& ctx, bool leaf_left_child,
                     LeafStats* stats) {
  if (m == 0) {
    if (stats) stats->observe(x);
    if (leaf_left_child) {
      mpq_class l;
      left_child_mpq(x, ctx.u, l);
      return l;
    }
    return x;
  }
  mpq_class l, r;
  left_child_mpq(x, ctx.u, l);
  right_child_mpq(x, ctx.v, r);
  mpq_class sum = walk_exact(l, m - 1, ctx, leaf_left_child, stats) +
                  walk_exact(r, m - 1, ctx, leaf_left_child, stats);
  check_budget(sum, ctx.digit_budget);
  return sum;
}

void walk_enclosure(const mpq_class& x, int m, const Ctx& ctx, bool leaf_left_child,
                    LeafStats* stats, Enclosure& acc) {
  if (m == 0) {
    if (stats) stats->observe(x);
    if (leaf_left_child) {
      mpq_class l;
      left_child_mpq(x, ctx.u, l);
      acc.add(l);
    } else {
      acc.add(x);
    }
    return;
  }
  mpq_class l, r;
  left_child_mpq(x, ctx.u, l);
  right_child_mpq(x, ctx.v, r);
  walk_enclosure(l, m - 1, ctx, leaf_left_child, stats, acc);
  walk_enclosure(r, m - 1, ctx, leaf_left_child, stats, acc);
}

// Rows are always split into subtrees at this fixed depth (or at the row
// depth when shallower). Keeping the split independent of the worker count
// makes enclosure endpoints bit-identical no matter how the subtrees are
// scheduled: each subtree is accumulated in a fixed order and the partials
// merge in left-to-right subtree order.
constexpr int kSplitDepth = 6;

void collect_subtree_roots(const mpq_class& x, int d, const Ctx& ctx, std::vector<mpq_class>& out) {
  if (d == 0) {
    out.push_back(x);
    return;
  }
  mpq_class l, r;
  left_child_mpq(x, ctx.u, l);
  right_child_mpq(x, ctx.v, r);
  collect_subtree_roots(l, d - 1, ctx, out);
  collect_subtree_roots(r, d - 1, ctx, out);
}

struct Partial {
  std::optional<mpq_class> exact;
  std::optional<Enclosure> enc;
  LeafStats stats;
};

std::vector<Partial> run_over_row(const mpq_class& root, int n, const Ctx& ctx, const SumMode& mode,
                                  int workers, bool leaf_left_child, bool with_stats,
                                  long long base_len) {
  const int d = std::min(n, kSplitDepth);
  std::vector<mpq_class> roots;
  roots.reserve(std::size_t{1} << d);
  collect_subtree_roots(root, d, ctx, roots);
  const int m = n - d;

  std::vector<Partial> partials(roots.size());
  auto job = [&](std::size_t i) {
    Partial& p = partials[i];
    p.stats.enabled = with_stats;
    p.stats.base_len = base_len;
    LeafStats* stats = with_stats ? &p.stats : nullptr;
    if (mode.is_exact()) {
      p.exact = walk_exact(roots[i], m, ctx, leaf_left_child, stats);
    } else {
      p.enc.emplace(mode.precision_bits);
      walk_enclosure(roots[i], m, ctx, leaf_left_child, stats, *p.enc);
    }
  };

  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), roots.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < roots.size(); ++i) job(i);
    return partials;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(nthreads);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        while (!failed.load(std::memory_order_relaxed)) {
          const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= partials.size()) break;
          job(i);
        }
      } catch (...) {
        errors[t] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return partials;
}

void validate_row_args(const Rational& root, int n, int workers) {
  if (root.is_zero()) throw DomainError("row: root must be positive");
  if (n < 0) throw DomainError("row: depth must be >= 0");
  if (n > 62) throw DomainError("row: 2^" + std::to_string(n) + " vertices will not be counted in 64 bits");
  if (workers < 1) throw DomainError("row: worker count must be >= 1");
}

}  // namespace

RowCursor::RowCursor(const Rational& root, int depth, const TreeParams& params, bool reversed)
    : params_(params), target_(depth), reversed_(reversed) {
  validate_row_args(root, depth, 1);
  stack_.reserve(static_cast<std::size_t>(depth) + 1);
  stack_.push_back(Frame{root.mpq(), 0});
}

bool RowCursor::next(Rational& out) {
  while (!stack_.empty()) {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    if (f.depth == target_) {
      out = Rational::from_reduced(f.value.get_num(), f.value.get_den());
      ++produced_;
      return true;
    }
    mpq_class l, r;
    left_child_mpq(f.value, params_.u, l);
    right_child_mpq(f.value, params_.v, r);
    // The child popped first is visited first.
    if (reversed_) {
      stack_.push_back(Frame{std::move(l), f.depth + 1});
      stack_.push_back(Frame{std::move(r), f.depth + 1});
    } else {
      stack_.push_back(Frame{std::move(r), f.depth + 1});
      stack_.push_back(Frame{std::move(l), f.depth + 1});
    }
  }
  return false;
}

RowStats row_stats(const Rational& root, int n, const TreeParams& params, const SumMode& mode,
                   int workers, std::size_t digit_budget) {
  validate_row_args(root, n, workers);
  const Ctx ctx{params.u, params.v, digit_budget};
  const long long base_len = cf_length(root);
  auto partials = run_over_row(root.mpq(), n, ctx, mode, workers, false, true, base_len);

  RowStats out;
  out.n = n;
  for (const Partial& p : partials) {
    out.count += p.stats.count;
    out.int_part_sum += p.stats.int_part_sum;
    for (const auto& [k, c] : p.stats.hist) out.cf_length_histogram[k] += c;
  }

  if (mode.is_exact()) {
    mpq_class total(0);
    for (const Partial& p : partials) {
      total += *p.exact;
      check_budget(total, digit_budget);
    }
    mpq_class mean;
    mpq_div_2exp(mean.get_mpq_t(), total.get_mpq_t(), static_cast<mp_bitcnt_t>(n));
    out.sum = Rational::from_mpq(std::move(total));
    out.mean = Rational::from_mpq(std::move(mean));
  } else {
    Enclosure total(mode.precision_bits);
    for (const Partial& p : partials) total.add(*p.enc);
    Enclosure mean = total;
    mean.scale_pow2(-n);
    out.sum = std::move(total);
    out.mean = std::move(mean);
  }
  return out;
}

std::vector<RowMean> mean_series(const Rational& root, int n_max, const TreeParams& params,
                                 const SumMode& mode, int workers, std::size_t digit_budget) {
  validate_row_args(root, n_max, workers);
  const Ctx ctx{params.u, params.v, digit_budget};
  std::vector<RowMean> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);

  if (mode.is_exact()) {
    mpq_class sum = root.mpq();
    out.push_back(RowMean{0, Rational(root), Rational(root)});
    for (int k = 1; k <= n_max; ++k) {
      auto partials = run_over_row(root.mpq(), k - 1, ctx, mode, workers, true, false, 0);
      mpq_class left_sum(0);
      for (const Partial& p : partials) {
        left_sum += *p.exact;
        check_budget(left_sum, digit_budget);
      }
      // Row k = (left children of row k-1) + (row k-1 shifted up by v).
      mpz_class right_gain;
      mpz_mul_2exp(right_gain.get_mpz_t(), mpz_class(params.v).get_mpz_t(), k - 1);
      sum += left_sum;
      sum += right_gain;
      check_budget(sum, digit_budget);
      mpq_class mean;
      mpq_div_2exp(mean.get_mpq_t(), sum.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
      out.push_back(RowMean{k, Rational::from_mpq(sum), Rational::from_mpq(std::move(mean))});
    }
  } else {
    Enclosure sum(root, mode.precision_bits);
    out.push_back(RowMean{0, sum, sum});
    for (int k = 1; k <= n_max; ++k) {
      auto partials = run_over_row(root.mpq(), k - 1, ctx, mode, workers, true, false, 0);
      Enclosure left_sum(mode.precision_bits);
      for (const Partial& p : partials) left_sum.add(*p.enc);
      mpz_class right_gain;
      mpz_mul_2exp(right_gain.get_mpz_t(), mpz_class(params.v).get_mpz_t(), k - 1);
      sum.add(left_sum);
      sum.add_integer(right_gain);
      Enclosure mean = sum;
      mean.scale_pow2(-k);
      out.push_back(RowMean{k, sum, std::move(mean)});
    }
  }
  return out;
}

std::map<long long, unsigned long long> cf_length_counts(const Rational& root, int n,
                                                         const TreeParams& params, int workers) {
  validate_row_args(root, n, workers);
  const Ctx ctx{params.u, params.v, kDefaultDigitBudget};
  const long long base_len = cf_length(root);
  // Only the histogram is wanted; a narrow enclosure keeps the leaf visit
  // cheap without big-integer sums.
  auto partials =
      run_over_row(root.mpq(), n, ctx, SumMode::enclosure(Enclosure::kMinPrecisionBits), workers,
                   false, true, base_len);
  std::map<long long, unsigned long long> hist;
  for (const Partial& p : partials) {
    for (const auto& [k, c] : p.stats.hist) hist[k] += c;
  }
  return hist;
}

std::map<long long, unsigned long long> predicted_cf_length_counts(const Rational& root, int n,
                                                                   HistogramVariant variant) {
  if (root.is_zero()) throw DomainError("histogram: root must be positive");
  if (n < 0 || n > 61) throw DomainError("histogram: depth out of range");
  const Rational one(1ul);
  std::map<long long, unsigned long long> out;
  mpz_class b;
  if (root == one) {
    // At root 1 every length gain m contributes C(n, m), odd and even alike.
    for (long long m = 0; m <= n; ++m) {
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
      if (sgn(b) > 0) out[m] = b.get_ui();
    }
    return out;
  }
  const long long start = variant == HistogramVariant::Corrected ? 0 : 1;
  if (root > one) {
    for (long long m = start; m <= n + 1; m += 2) {
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n + 1), static_cast<unsigned long>(m));
      if (sgn(b) > 0) out[m] = b.get_ui();
    }
  } else {
    for (long long m = start; m + 1 <= n + 1; m += 2) {
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n + 1),
                   static_cast<unsigned long>(m + 1));
      if (sgn(b) > 0) out[m] = b.get_ui();
    }
  }
  return out;
}

Rational row_bijection(const Rational& y, int n, const TreeParams& params) {
  if (y.is_zero()) throw DomainError("row_bijection: value must be positive");
  if (n < 0) throw DomainError("row_bijection: depth must be >= 0");

  // Exactly one of the two representations has an even last index; vertices
  // below root v are exactly the values whose coefficients there alternate
  // between multiples of v (even positions) and of u (odd positions).
  const auto reps = detail::representations(y);
  const ContinuedFraction& rep = reps[0].last_index() % 2 == 0 ? reps[0] : reps[1];
  const auto& p = rep.coeffs();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const unsigned long mod = i % 2 == 0 ? params.v : params.u;
    if (!mpz_divisible_ui_p(p[i].get_mpz_t(), mod)) {
      throw DomainError("row_bijection: " + y.str() + " is not a vertex below root " +
                        std::to_string(params.v));
    }
  }

  std::vector<mpz_class> alpha(p.size());
  mpz_class total(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    mpz_divexact_ui(alpha[i].get_mpz_t(), p[i].get_mpz_t(), i % 2 == 0 ? params.v : params.u);
    total += alpha[i];
  }
  if (total != n + 1) {
    throw DomainError("row_bijection: " + y.str() + " is not at depth " + std::to_string(n) +
                      " below root " + std::to_string(params.v));
  }

  const std::size_t k = p.size() - 1;
  if (k == 0 && alpha[0] == 1) {
    // y is the root v itself (only possible at n = 0); its image is the
    // other interval endpoint, 1/u.
    return Rational(mpz_class(1), mpz_class(params.u));
  }

  std::vector<mpz_class> image;
  if (alpha[k] == 1) {
    // Fold the final v coefficient into the preceding u position.
    image.assign(p.begin(), p.end() - 1);
    image.back() += params.u;
  } else {
    // Peel one v off the tail and close with a bare u.
    image = p;
    image[k] -= params.v;
    image.emplace_back(params.u);
  }
  return ContinuedFraction::from_coeffs(std::move(image)).decode();
}

bool symmetric_row_check(int n) {
  const TreeParams params(1, 1);
  const Rational one(1ul);
  RowCursor forward(one, n, params, false);
  RowCursor backward(one, n, params, true);
  Rational a, b;
  while (forward.next(a)) {
    if (!backward.next(b)) return false;
    // Mirror entries must be exact reciprocals; reduced forms make that a
    // numerator/denominator swap.
    if (a.num() != b.den() || a.den() != b.num()) return false;
  }
  return !backward.next(b);
}

}  // namespace cwforest
