#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwforest/row_engine.hpp"

namespace cwforest {

/// Certified interval around v + ln(2)/u, the conjectured limit of the row
/// means. The default precision gives comfortably more than 50 significant
/// decimal digits.
Enclosure limit_enclosure(const TreeParams& params, int precision_bits = 192);

/// Exact truncation of the two series behind the limit heuristic:
/// (v/4) * sum_{k=0..K} (k+1)/2^k + (1/u) * sum_{k=1..K} 1/(k 2^k),
/// which converge to v and ln(2)/u respectively.
Rational heuristic_partial_sum(const TreeParams& params, int k_max);

/// One row of a convergence table: the row mean (exactly, when available),
/// a certified interval around it, and a certified interval around the
/// distance still separating it from the limit.
struct ConvergenceRow {
  int n;
  std::optional<Rational> mean_exact;
  Enclosure mean_bounds;
  Enclosure gap;  // limit minus mean, outward
};

struct ConvergenceReport {
  TreeParams params;
  Rational root;
  Enclosure limit;
  std::vector<ConvergenceRow> rows;
};

ConvergenceReport convergence_report(const Rational& root, const TreeParams& params, int n_max,
                                     const SumMode& mode, int workers = 1,
                                     std::size_t digit_budget = kDefaultDigitBudget);

/// Strict growth of row means below one root; `first_violation` is the first
/// n whose step up to n+1 failed (or could not be certified), -1 when clean.
struct RootMonotonicity {
  Rational root;
  bool ok = false;
  int first_violation = -1;
};

/// Checks that the mean strictly increases row over row below both interval
/// endpoints 1/u and v.
struct MonotonicityResult {
  std::vector<RootMonotonicity> roots;

  bool all_ok() const {
    for (const auto& r : roots) {
      if (!r.ok) return false;
    }
    return !roots.empty();
  }
};

MonotonicityResult monotonicity_check(const TreeParams& params, int n_max, const SumMode& mode,
                                      int workers = 1,
                                      std::size_t digit_budget = kDefaultDigitBudget);

/// Which of the two interval endpoints to use as the root of each tree.
enum class RootChoice { LowerEndpoint, UpperEndpoint };  // 1/u or v

/// limit - mean at a fixed depth for one parameter pair, together with the
/// same gap scaled by u^2 v (the scale on which gaps across parameters are
/// comparable).
struct GapCell {
  TreeParams params;
  Enclosure gap;
  Enclosure normalized;
};

struct GapGrid {
  int n = 0;
  std::vector<GapCell> cells;
  bool all_positive = false;  // every gap certified > 0
};

GapGrid mean_gap_grid(const std::vector<TreeParams>& grid, RootChoice root_choice, int n,
                      const SumMode& mode, int workers = 1,
                      std::size_t digit_budget = kDefaultDigitBudget);

/// Certifies gap[i] > gap[i+1] along the list.
bool gaps_strictly_decreasing(const std::vector<GapCell>& chain);

/// |A(z1; n) - A(z2; n)| per row, plus a least-squares estimate of the decay
/// ratio from the tail of the table.
struct DecayRow {
  int n;
  ExactOrEnclosure abs_diff;
};

struct DecayResult {
  std::vector<DecayRow> rows;
  /// exp(slope) of the least-squares line through (n, log |diff|) over the
  /// last `fit_window` rows, skipping rows whose difference is exactly zero
  /// (or, in enclosure mode, not certified positive). 0 when fewer than two
  /// points remain.
  double fitted_ratio = 0.0;
  int fit_points = 0;
};

DecayResult mean_difference_decay(const Rational& z1, const Rational& z2, const TreeParams& params,
                                  int n_max, const SumMode& mode, int workers = 1,
                                  std::size_t digit_budget = kDefaultDigitBudget,
                                  int fit_window = 6);

/// In the (1,1) tree rooted at 1 the row sums have the closed form
/// S(n) = (3 * 2^n - 1) / 2; compares the engine's exact sums against it.
bool closed_form_check_11(int n_max, int workers = 1);

/// Every positive rational belongs to exactly one tree: locating a/b must
/// land on a root in [1/u, v], walking back down must reproduce a/b, and the
/// values inside [1/u, v] are exactly the ones located at depth 0.
struct PartitionReport {
  TreeParams params;
  unsigned long max_entry = 0;
  unsigned long long checked = 0;
  unsigned long long failure_count = 0;
  std::vector<std::string> failure_samples;  // capped

  bool ok() const { return failure_count == 0; }
};

PartitionReport partition_check(const TreeParams& params, unsigned long max_entry);

}  // namespace cwforest
