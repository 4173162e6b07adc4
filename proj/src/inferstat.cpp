#include "lpw/inferstat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "lpw/errors.hpp"

namespace lpw::inferstat {

namespace {

constexpr const char* kModule = "inferstat";

// Continued fraction for the incomplete beta function, modified Lentz method.
double ibeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * ibeta_cf(a, b, x) / a;
    return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0) throw SchemaError(kModule, "degrees of freedom must be > 0");
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

double student_t_cdf(double t, double df) {
    const double half_tail = 0.5 * student_t_two_sided_p(t, df);
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_critical(double df, double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw SchemaError(kModule, "alpha must be in (0,1)");
    double lo = 0.0, hi = 1.0;
    while (student_t_two_sided_p(hi, df) > alpha) hi *= 2.0;  // expand bracket
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_two_sided_p(mid, df) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TTestResult paired_t(std::span<const double> diffs) {
    const std::size_t n = diffs.size();
    if (n < 2)
        throw InsufficientDataError(kModule, "paired t-test needs at least two differences");
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double var = ss / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    if (sd == 0.0)
        throw DegenerateError(kModule, "all differences identical; t statistic undefined");

    TTestResult r;
    r.n = static_cast<int>(n);
    r.mean_diff = mean;
    r.sd_diff = sd;
    r.df = static_cast<double>(n - 1);
    const double se = sd / std::sqrt(static_cast<double>(n));
    r.t = mean / se;
    r.p_two_sided = student_t_two_sided_p(r.t, r.df);
    r.cohens_d = mean / sd;
    const double tcrit = student_t_critical(r.df, 0.05);
    r.ci_lo = mean - tcrit * se;
    r.ci_hi = mean + tcrit * se;
    return r;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs, int exact_cutoff) {
    std::vector<double> d;
    for (double x : diffs)
        if (x != 0.0) d.push_back(x);  // classical zero handling: drop
    if (d.empty())
        throw DegenerateError(kModule, "all differences are zero; signed-rank test undefined");

    const std::size_t n = d.size();
    // Midranks of |d|.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
    std::vector<double> rank(n, 0.0);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = mid;
        tie_sizes.push_back(j - i);
        i = j;
    }

    WilcoxonResult r;
    r.n_effective = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0)
            r.w_plus += rank[i];
        else
            r.w_minus += rank[i];
    }
    r.w = std::min(r.w_plus, r.w_minus);

    if (n <= static_cast<std::size_t>(exact_cutoff)) {
        // Exact permutation distribution of W+ over all 2^n sign patterns.
        // Ranks are multiples of 1/2, so doubled ranks are integers and the
        // subset-sum recursion counts every pattern exactly.
        std::vector<std::uint64_t> doubled(n);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<std::uint64_t>(std::llround(2.0 * rank[i]));
            total += doubled[i];
        }
        std::vector<std::uint64_t> count(total + 1, 0);
        count[0] = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint64_t s = total; s + 1 > doubled[i]; --s)
                count[s] += count[s - doubled[i]];

        const auto w2 = static_cast<std::uint64_t>(std::llround(2.0 * r.w));
        std::uint64_t lower = 0, upper = 0;
        for (std::uint64_t s = 0; s <= total; ++s) {
            if (s <= w2) lower += count[s];
            if (s + w2 >= total) upper += count[s];
        }
        const double patterns = std::ldexp(1.0, static_cast<int>(n));  // 2^n
        r.p_two_sided = std::min(1.0, (static_cast<double>(lower) + static_cast<double>(upper)) /
                                          patterns);
        r.exact = true;
    } else {
        const double nd = static_cast<double>(n);
        const double mean = nd * (nd + 1.0) / 4.0;
        double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
        for (std::size_t t : tie_sizes) {
            const double td = static_cast<double>(t);
            var -= (td * td * td - td) / 48.0;
        }
        if (var <= 0.0)
            throw DegenerateError(kModule, "zero variance in signed-rank distribution");
        const double z = (r.w - mean + 0.5) / std::sqrt(var);  // continuity correction
        r.p_two_sided = std::min(1.0, 2.0 * normal_cdf(z));
        r.exact = false;
    }
    return r;
}

PairedComparison compare(const std::string& label, std::span<const double> a,
                         std::span<const double> b) {
    if (a.size() != b.size())
        throw SchemaError(kModule, "paired series length mismatch for '" + label + "'");
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];

    PairedComparison c;
    c.label = label;
    c.n_pairs = static_cast<int>(diffs.size());
    c.df = c.n_pairs - 1;
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    c.mean_diff = mean;
    c.sd_diff = diffs.size() > 1 ? std::sqrt(ss / static_cast<double>(diffs.size() - 1)) : 0.0;

    try {
        const TTestResult t = paired_t(diffs);
        c.t = t.t;
        c.p_two_sided = t.p_two_sided;
        c.ci_lo = t.ci_lo;
        c.ci_hi = t.ci_hi;
        c.cohens_d = t.cohens_d;
    } catch (const DegenerateError&) {
        c.degenerate = true;
    }
    try {
        const WilcoxonResult w = wilcoxon_signed_rank(diffs);
        c.wilcoxon_w = w.w;
        c.wilcoxon_p = w.p_two_sided;
    } catch (const DegenerateError&) {
        c.degenerate = true;
    }
    return c;
}

namespace {

std::vector<double> select_values(
    std::span<const std::pair<metrics::TrialAnalysis, metrics::TrialAnalysis>> pairs,
    ValueSelector sel, bool first) {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        const metrics::TrialAnalysis& t = first ? a : b;
        switch (sel) {
            case ValueSelector::QPed: out.push_back(t.q_ped); break;
            case ValueSelector::Latency: out.push_back(t.latency_s); break;
            case ValueSelector::NetEnergy: out.push_back(t.net_j); break;
            case ValueSelector::Lpw: out.push_back(t.m.lpw); break;
        }
    }
    return out;
}

std::string selector_label(ValueSelector sel) {
    switch (sel) {
        case ValueSelector::QPed: return "q_ped";
        case ValueSelector::Latency: return "latency_s";
        case ValueSelector::NetEnergy: return "net_j";
        case ValueSelector::Lpw: return "lpw";
    }
    return "?";
}

}  // namespace

SliceComparisons compare_slices(
    std::span<const std::pair<metrics::TrialAnalysis, metrics::TrialAnalysis>> pairs,
    ValueSelector selector, Grouping grouping) {
    SliceComparisons out;
    auto emit = [&](const std::string& label, std::span<const double> a,
                    std::span<const double> b) {
        if (a.size() < 2) {
            out.warnings.push_back("group '" + label + "' skipped: fewer than two pairs");
            return;
        }
        out.rows.push_back(compare(label, a, b));
    };

    switch (grouping) {
        case Grouping::Overall: {
            emit(selector_label(selector), select_values(pairs, selector, true),
                 select_values(pairs, selector, false));
            break;
        }
        case Grouping::PerDimension: {
            for (Dimension dim : kDimensions) {
                std::vector<double> a, b;
                a.reserve(pairs.size());
                b.reserve(pairs.size());
                for (const auto& [x, y] : pairs) {
                    a.push_back(x.w[dim_index(dim)]);
                    b.push_back(y.w[dim_index(dim)]);
                }
                emit(std::string(to_string(dim)), a, b);
            }
            break;
        }
        case Grouping::PerCategory: {
            for (Category cat : kCategories) {
                std::vector<std::pair<metrics::TrialAnalysis, metrics::TrialAnalysis>> slice;
                for (const auto& p : pairs)
                    if (p.first.category == cat) slice.push_back(p);
                if (slice.empty()) continue;
                emit(std::string(to_string(cat)), select_values(slice, selector, true),
                     select_values(slice, selector, false));
            }
            break;
        }
    }
    return out;
}

}  // namespace lpw::inferstat
