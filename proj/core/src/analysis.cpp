#include "cwforest/analysis.hpp"

#include <cmath>

namespace cwforest {

namespace {

/// Reporting intervals derived from exact values reuse the mode's precision;
/// the limit itself is always evaluated with headroom above that.
int limit_precision_for(const SumMode& mode) { return std::max(192, mode.precision_bits + 64); }

Enclosure mean_as_enclosure(const ExactOrEnclosure& mean, int precision_bits) {
  if (const Rational* exact = std::get_if<Rational>(&mean)) return Enclosure(*exact, precision_bits);
  return std::get<Enclosure>(mean);
}

/// Enclosure of |x| given an enclosure of x.
Enclosure abs_enclosure(const Enclosure& x) {
  Enclosure out(x);
  if (mpfr_sgn(out.lo_ptr()) >= 0) return out;
  if (mpfr_sgn(out.hi_ptr()) <= 0) {
    // Entirely nonpositive: negate and swap (negation is exact).
    mpfr_swap(out.lo_ptr(), out.hi_ptr());
    mpfr_neg(out.lo_ptr(), out.lo_ptr(), MPFR_RNDD);
    mpfr_neg(out.hi_ptr(), out.hi_ptr(), MPFR_RNDU);
    return out;
  }
  // Straddles zero: |x| lies in [0, max(-lo, hi)].
  mpfr_neg(out.lo_ptr(), out.lo_ptr(), MPFR_RNDU);
  mpfr_max(out.hi_ptr(), out.hi_ptr(), out.lo_ptr(), MPFR_RNDU);
  mpfr_set_zero(out.lo_ptr(), +1);
  return out;
}

}  // namespace

Enclosure limit_enclosure(const TreeParams& params, int precision_bits) {
  Enclosure out(precision_bits);
  mpfr_const_log2(out.lo_ptr(), MPFR_RNDD);
  mpfr_const_log2(out.hi_ptr(), MPFR_RNDU);
  mpfr_div_ui(out.lo_ptr(), out.lo_ptr(), params.u, MPFR_RNDD);
  mpfr_div_ui(out.hi_ptr(), out.hi_ptr(), params.u, MPFR_RNDU);
  mpfr_add_ui(out.lo_ptr(), out.lo_ptr(), params.v, MPFR_RNDD);
  mpfr_add_ui(out.hi_ptr(), out.hi_ptr(), params.v, MPFR_RNDU);
  return out;
}

Rational heuristic_partial_sum(const TreeParams& params, int k_max) {
  if (k_max < 0) throw DomainError("heuristic: k_max must be >= 0");
  // sum_{k=0..K} (k+1)/2^k over a common denominator 2^K.
  mpz_class pow(1);  // 2^(K-k) built backwards
  mpz_class first_num(0);
  for (int k = k_max; k >= 0; --k) {
    first_num += (k + 1) * pow;
    pow <<= 1;
  }
  mpz_class two_k;
  mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k_max));
  Rational first(first_num * params.v, 4 * two_k);

  Rational second;
  for (int k = 1; k <= k_max; ++k) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(k));
    den *= k;
    den *= params.u;
    second = second + Rational(mpz_class(1), den);
  }
  return first + second;
}

ConvergenceReport convergence_report(const Rational& root, const TreeParams& params, int n_max,
                                     const SumMode& mode, int workers, std::size_t digit_budget) {
  Enclosure limit = limit_enclosure(params, limit_precision_for(mode));
  std::vector<RowMean> series = mean_series(root, n_max, params, mode, workers, digit_budget);

  ConvergenceReport report{params, root, limit, {}};
  report.rows.reserve(series.size());
  for (const RowMean& rm : series) {
    Enclosure bounds = mean_as_enclosure(rm.mean, mode.precision_bits);
    Enclosure gap = Enclosure::difference(limit, bounds);
    std::optional<Rational> exact;
    if (const Rational* e = std::get_if<Rational>(&rm.mean)) exact = *e;
    report.rows.push_back(ConvergenceRow{rm.n, std::move(exact), std::move(bounds), std::move(gap)});
  }
  return report;
}

MonotonicityResult monotonicity_check(const TreeParams& params, int n_max, const SumMode& mode,
                                      int workers, std::size_t digit_budget) {
  MonotonicityResult result;
  const Rational endpoints[2] = {Rational(mpz_class(1), mpz_class(params.u)),
                                 Rational(params.v)};
  for (const Rational& root : endpoints) {
    std::vector<RowMean> series = mean_series(root, n_max, params, mode, workers, digit_budget);
    RootMonotonicity rm{root, true, -1};
    for (int n = 0; n + 1 <= n_max; ++n) {
      bool increased;
      if (mode.is_exact()) {
        increased = std::get<Rational>(series[n + 1].mean) > std::get<Rational>(series[n].mean);
      } else {
        increased =
            std::get<Enclosure>(series[n].mean).certainly_below(std::get<Enclosure>(series[n + 1].mean));
      }
      if (!increased) {
        rm.ok = false;
        rm.first_violation = n;
        break;
      }
    }
    result.roots.push_back(std::move(rm));
  }
  return result;
}

GapGrid mean_gap_grid(const std::vector<TreeParams>& grid, RootChoice root_choice, int n,
                      const SumMode& mode, int workers, std::size_t digit_budget) {
  GapGrid out;
  out.n = n;
  out.all_positive = true;
  for (const TreeParams& params : grid) {
    const Rational root = root_choice == RootChoice::LowerEndpoint
                              ? Rational(mpz_class(1), mpz_class(params.u))
                              : Rational(params.v);
    RowStats stats = row_stats(root, n, params, mode, workers, digit_budget);
    Enclosure mean = mean_as_enclosure(stats.mean, mode.precision_bits);
    Enclosure limit = limit_enclosure(params, limit_precision_for(mode));
    Enclosure gap = Enclosure::difference(limit, mean);
    Enclosure normalized = gap;
    normalized.scale_int(mpz_class(params.u) * params.u * params.v);
    out.all_positive = out.all_positive && gap.certainly_positive();
    out.cells.push_back(GapCell{params, std::move(gap), std::move(normalized)});
  }
  return out;
}

bool gaps_strictly_decreasing(const std::vector<GapCell>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!chain[i + 1].gap.certainly_below(chain[i].gap)) return false;
  }
  return true;
}

DecayResult mean_difference_decay(const Rational& z1, const Rational& z2, const TreeParams& params,
                                  int n_max, const SumMode& mode, int workers,
                                  std::size_t digit_budget, int fit_window) {
  if (fit_window < 2) throw DomainError("decay: fit window must cover at least 2 rows");
  const std::vector<RowMean> s1 = mean_series(z1, n_max, params, mode, workers, digit_budget);
  const std::vector<RowMean> s2 = mean_series(z2, n_max, params, mode, workers, digit_budget);

  DecayResult result;
  result.rows.reserve(s1.size());
  for (int n = 0; n <= n_max; ++n) {
    if (mode.is_exact()) {
      const Rational& a = std::get<Rational>(s1[n].mean);
      const Rational& b = std::get<Rational>(s2[n].mean);
      result.rows.push_back(DecayRow{n, a >= b ? a - b : b - a});
    } else {
      Enclosure diff = Enclosure::difference(std::get<Enclosure>(s1[n].mean),
                                             std::get<Enclosure>(s2[n].mean));
      result.rows.push_back(DecayRow{n, abs_enclosure(diff)});
    }
  }

  // Least squares of log|diff| against n across the tail of the table.
  std::vector<double> xs, ys;
  const int fit_from = std::max(0, n_max - fit_window + 1);
  for (int n = fit_from; n <= n_max; ++n) {
    const ExactOrEnclosure& d = result.rows[static_cast<std::size_t>(n)].abs_diff;
    double value = 0.0;
    if (const Rational* exact = std::get_if<Rational>(&d)) {
      if (exact->is_zero()) continue;
      value = mpq_get_d(exact->mpq().get_mpq_t());
    } else {
      const Enclosure& e = std::get<Enclosure>(d);
      if (!e.certainly_positive()) continue;
      value = (e.lo_double() + e.hi_double()) / 2;
    }
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(value));
  }
  result.fit_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    double x_mean = 0, y_mean = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      x_mean += xs[i];
      y_mean += ys[i];
    }
    x_mean /= static_cast<double>(xs.size());
    y_mean /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
      sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    }
    result.fitted_ratio = std::exp(sxy / sxx);
  }
  return result;
}

bool closed_form_check_11(int n_max, int workers) {
  const TreeParams params(1, 1);
  const Rational one(1ul);
  const std::vector<RowMean> series = mean_series(one, n_max, params, SumMode::exact(), workers);
  for (const RowMean& rm : series) {
    mpz_class num;  // S(n) = (3 * 2^n - 1) / 2
    mpz_ui_pow_ui(num.get_mpz_t(), 2, static_cast<unsigned long>(rm.n));
    num = 3 * num - 1;
    if (std::get<Rational>(rm.sum) != Rational(num, mpz_class(2))) return false;
  }
  return true;
}

PartitionReport partition_check(const TreeParams& params, unsigned long max_entry) {
  if (max_entry < 1) throw DomainError("partition: max_entry must be >= 1");
  constexpr std::size_t kMaxSamples = 32;
  PartitionReport report;
  report.params = params;
  report.max_entry = max_entry;

  const auto record = [&](const std::string& what) {
    ++report.failure_count;
    if (report.failure_samples.size() < kMaxSamples) report.failure_samples.push_back(what);
  };

  mpz_class g;
  for (unsigned long a = 1; a <= max_entry; ++a) {
    for (unsigned long b = 1; b <= max_entry; ++b) {
      mpz_gcd_ui(g.get_mpz_t(), mpz_class(a).get_mpz_t(), b);
      if (g != 1) continue;
      const Rational q{mpz_class(a), mpz_class(b)};
      ++report.checked;
      try {
        const Location loc = locate(q, params);
        if (vertex_at_path(loc.root, loc.path, params) != q) {
          record(q.str() + ": path does not lead back to the value");
          continue;
        }
        const bool orphan = is_orphan(q, params);
        if (orphan != loc.path.empty()) {
          record(q.str() + ": root-interval membership disagrees with located depth");
          continue;
        }
        if (orphan && loc.root != q) {
          record(q.str() + ": interval value located under a different root");
        }
      } catch (const Error& e) {
        record(q.str() + ": " + e.what());
      }
    }
  }
  return report;
}

}  // namespace cwforest
