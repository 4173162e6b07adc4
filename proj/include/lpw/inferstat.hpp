#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpw/metrics.hpp"

namespace lpw::inferstat {

// Student-t CDF via the regularized incomplete beta function (continued
// fraction), good to better than 1e-12.
double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);
// Critical value for a two-sided interval: P(|T| > t) == alpha.
double student_t_critical(double df, double alpha);
double regularized_incomplete_beta(double a, double b, double x);

struct TTestResult {
    int n = 0;
    double mean_diff = 0, sd_diff = 0;
    double t = 0, df = 0, p_two_sided = 0;
    double ci_lo = 0, ci_hi = 0;  // 95%
    double cohens_d = 0;          // paired form: mean/sd of differences
};

// Throws InsufficientDataError (n < 2) or DegenerateError (all differences equal).
TTestResult paired_t(std::span<const double> diffs);

struct WilcoxonResult {
    double w_plus = 0, w_minus = 0, w = 0;  // w = min(w_plus, w_minus)
    double p_two_sided = 0;
    int n_effective = 0;  // zeros dropped
    bool exact = false;   // exact signed-rank distribution vs normal approximation
};

// Zeros dropped, ties midranked. Exact permutation distribution (all 2^n sign
// patterns, counted by subset-sum recursion) for n <= exact_cutoff; tie-corrected
// normal approximation with continuity correction above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, int exact_cutoff = 25);

struct PairedComparison {
    std::string label;
    int n_pairs = 0;
    double mean_diff = 0, sd_diff = 0;
    int df = 0;  // n - 1
    bool degenerate = false;  // zero-variance differences: t/p/d unavailable
    std::optional<double> t, p_two_sided, ci_lo, ci_hi, cohens_d;
    std::optional<double> wilcoxon_w, wilcoxon_p;
};

PairedComparison compare(const std::string& label, std::span<const double> a,
                         std::span<const double> b);

enum class ValueSelector { QPed, Latency, NetEnergy, Lpw };
enum class Grouping { Overall, PerDimension, PerCategory };

struct SliceComparisons {
    std::vector<PairedComparison> rows;
    std::vector<std::string> warnings;
};

// One comparison per group in canonical order (overall; CA,CC,SQ,LA; the five
// categories). PerDimension always compares the weighted dimension scores.
// Groups with fewer than two pairs are skipped with a warning.
SliceComparisons compare_slices(
    std::span<const std::pair<metrics::TrialAnalysis, metrics::TrialAnalysis>> pairs,
    ValueSelector selector, Grouping grouping);

}  // namespace lpw::inferstat
