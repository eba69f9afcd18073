#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

#include "cwforest/enclosure.hpp"
#include "cwforest/tree.hpp"

namespace cwforest {

/// How row sums are accumulated: exact rationals, or certified enclosures of
/// directed-rounded floats at a fixed precision. In exact mode the precision
/// is still carried along — it sizes the reporting intervals derived from
/// exact values downstream.
struct SumMode {
  enum class Kind { Exact, Enclosure };

  Kind kind = Kind::Exact;
  int precision_bits = 128;

  static SumMode exact(int report_precision_bits = 128);
  static SumMode enclosure(int precision_bits = 128);

  bool is_exact() const { return kind == Kind::Exact; }
};

/// Default cap on the decimal digit count of any reduced denominator built
/// during exact accumulation; exceeding it raises DigitBudgetError rather
/// than silently grinding on.
inline constexpr std::size_t kDefaultDigitBudget = 1'000'000;

/// Exact sums carry a Rational; enclosure sums carry an interval.
using ExactOrEnclosure = std::variant<Rational, Enclosure>;

/// Streaming enumeration of one row (all vertices at a fixed depth below a
/// root) in left-to-right order, or right-to-left when `reversed`. Uses an
/// explicit stack of at most depth+1 frames, so memory stays linear in the
/// depth while the row itself is exponentially large.
class RowCursor {
 public:
  RowCursor(const Rational& root, int depth, const TreeParams& params, bool reversed = false);

  /// Emits the next vertex; false when the row is exhausted.
  bool next(Rational& out);

  unsigned long long produced() const { return produced_; }

 private:
  struct Frame {
    mpq_class value;
    int depth;
  };

  std::vector<Frame> stack_;
  TreeParams params_;
  int target_;
  bool reversed_;
  unsigned long long produced_ = 0;
};

/// Aggregate facts about one row.
struct RowStats {
  int n = 0;
  unsigned long long count = 0;  // always 2^n
  ExactOrEnclosure sum;
  ExactOrEnclosure mean;
  /// Sum of integer parts across the row.
  mpz_class int_part_sum;
  /// Vertices bucketed by how many continued-fraction coefficients they
  /// gained over the root: key is cf_length(y) - cf_length(root).
  std::map<long long, unsigned long long> cf_length_histogram;
};

/// Full statistics for the depth-n row below `root`. Deterministic for any
/// worker count: the row is split into subtrees at a fixed depth, partial
/// results are computed per subtree, and merging always happens in
/// left-to-right subtree order.
RowStats row_stats(const Rational& root, int n, const TreeParams& params, const SumMode& mode,
                   int workers = 1, std::size_t digit_budget = kDefaultDigitBudget);

/// One row's sum and mean.
struct RowMean {
  int n = 0;
  ExactOrEnclosure sum;
  ExactOrEnclosure mean;
};

/// Sums and means for every row n = 0..n_max, built incrementally: each
/// S(n) is S(n-1) + 2^(n-1) v plus the sum of the left children of row n-1,
/// because every right child contributes its parent's value plus v.
std::vector<RowMean> mean_series(const Rational& root, int n_max, const TreeParams& params,
                                 const SumMode& mode, int workers = 1,
                                 std::size_t digit_budget = kDefaultDigitBudget);

/// Just the continued-fraction-length histogram of a row (no sums, so no
/// digit budget applies).
std::map<long long, unsigned long long> cf_length_counts(const Rational& root, int n,
                                                         const TreeParams& params, int workers = 1);

/// The closed-form predictor for cf_length_counts comes in two variants:
/// Published is the formula as it appears in print, which puts the nonzero
/// counts on odd length gains for roots != 1 and demonstrably disagrees with
/// enumeration; Corrected flips that parity to even, matching enumeration.
/// Published is kept as a regression reference, not a usable predictor.
enum class HistogramVariant { Published, Corrected };

std::map<long long, unsigned long long> predicted_cf_length_counts(const Rational& root, int n,
                                                                   HistogramVariant variant);

/// The depth-preserving bijection from the row below root v onto the row
/// below root 1/u: a vertex's coefficients, read as multiples of v and u in
/// alternation, are reshuffled at the tail. Input must lie in the depth-n
/// row below v.
Rational row_bijection(const Rational& y, int n, const TreeParams& params);

/// In the (1,1) tree rooted at 1, row n read left to right is the row read
/// right to left with every entry inverted. Streams both directions at once
/// and checks all 2^n pairs.
bool symmetric_row_check(int n);

}  // namespace cwforest
