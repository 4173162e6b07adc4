#include <doctest.h>

#include <cmath>

#include "lpw/errors.hpp"
#include "lpw/metrics.hpp"

using namespace lpw;
using namespace lpw::metrics;

TEST_CASE("trial_metrics: unit case") {
    auto m = trial_metrics(1.0, 1.0, 1.0);
    CHECK(m.lpw == doctest::Approx(1.0));
    CHECK(m.qpj == doctest::Approx(1.0));
    CHECK(m.qps == doctest::Approx(1.0));
    CHECK(m.lpw_geo == doctest::Approx(1.0));
}

TEST_CASE("trial_metrics: worked example") {
    auto m = trial_metrics(8.0, 400.0, 10.0);
    CHECK(m.lpw == doctest::Approx(2.0e-3));
    CHECK(m.qpj == doctest::Approx(0.02));
    CHECK(m.qps == doctest::Approx(0.8));
    CHECK(m.lpw_geo == doctest::Approx(0.1265).epsilon(1e-3));
}

TEST_CASE("trial_metrics: cloud-scale inputs") {
    auto m = trial_metrics(8.24, 1550.0, 1.9);
    CHECK(m.lpw == doctest::Approx(2.80e-3).epsilon(5e-3));
}

TEST_CASE("trial_metrics rejects non-positive inputs") {
    CHECK_THROWS_AS(trial_metrics(8.0, 0.0, 1.0), SchemaError);
    CHECK_THROWS_AS(trial_metrics(8.0, 1.0, 0.0), SchemaError);
    CHECK_THROWS_AS(trial_metrics(0.0, 1.0, 1.0), SchemaError);
}

TEST_CASE("summarize: singleton collapses every field") {
    std::vector<double> v = {3.25};
    auto s = summarize(v, "cfg", "x");
    CHECK(s.mean == 3.25);
    CHECK(s.median == 3.25);
    CHECK(s.p5 == 3.25);
    CHECK(s.p95 == 3.25);
    CHECK(s.min == 3.25);
    CHECK(s.max == 3.25);
    CHECK(s.n == 1);
}

TEST_CASE("summarize: linear interpolation between order statistics") {
    std::vector<double> v = {1, 2, 3, 4};
    auto s = summarize(v, "cfg", "x");
    CHECK(s.median == doctest::Approx(2.5));
    CHECK(s.p25 == doctest::Approx(1.75));
    CHECK(s.p75 == doctest::Approx(3.25));
    CHECK(s.mean == doctest::Approx(2.5));
}

TEST_CASE("summarize: empty input is an error") {
    std::vector<double> v;
    CHECK_THROWS_AS(summarize(v, "cfg", "x"), InsufficientDataError);
}

TEST_CASE("fixed_q_lpw: reference-quality mode") {
    CHECK(fixed_q_lpw(652.0, 16.73, 8.24) == doctest::Approx(7.55e-4).epsilon(5e-3));
    // exact arithmetic for the same inputs
    CHECK(fixed_q_lpw(652.0, 16.73, 8.24) == doctest::Approx(8.24 / (652.0 * 16.73)));
    // a high-latency, high-energy row lands near 2.6e-5 only within loose rounding
    CHECK(fixed_q_lpw(3687.0, 81.93, 8.24) == doctest::Approx(8.24 / (3687.0 * 81.93)));
    CHECK(fixed_q_lpw(3687.0, 81.93, 8.24) == doctest::Approx(2.6e-5).epsilon(0.05));
    CHECK(fixed_q_lpw(100.0, 1.0, 0.0) == 0.0);  // degenerate but defined
}

namespace {

TrialRecord trial(int prompt, Category cat, double latency, double net) {
    TrialRecord t;
    t.config_id = "cfg";
    t.prompt_id = prompt;
    t.category = cat;
    t.latency_s = latency;
    t.net_j = net;
    return t;
}

scoring::QualityProfile profile(int prompt, double q) {
    scoring::QualityProfile p;
    p.prompt_id = prompt;
    p.q_ped = q;
    p.w = {q, q, q, q};
    p.scheme_id = "test";
    return p;
}

}  // namespace

TEST_CASE("build_analysis joins trials with profiles and computes metrics") {
    std::vector<TrialRecord> trials = {trial(2, Category::Science, 10.0, 400.0),
                                       trial(1, Category::Mathematics, 5.0, 200.0)};
    std::vector<scoring::QualityProfile> profiles = {profile(1, 8.0), profile(2, 9.0)};
    auto rows = build_analysis(trials, profiles);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].prompt_id == 1);  // sorted
    CHECK(rows[0].m.lpw == doctest::Approx(8.0 / (200.0 * 5.0)));
    CHECK(rows[1].m.lpw == doctest::Approx(9.0 / (400.0 * 10.0)));
}

TEST_CASE("build_analysis errors on a missing profile or missing net_j") {
    std::vector<TrialRecord> trials = {trial(1, Category::Science, 10.0, 400.0)};
    std::vector<scoring::QualityProfile> none;
    CHECK_THROWS_AS(build_analysis(trials, none), InsufficientDataError);

    trials[0].net_j.reset();
    std::vector<scoring::QualityProfile> one = {profile(1, 8.0)};
    CHECK_THROWS_AS(build_analysis(trials, one), SchemaError);
}

TEST_CASE("per_category emits canonical order and skips absent categories") {
    std::vector<TrialRecord> trials = {
        trial(1, Category::Humanities, 5.0, 100.0), trial(2, Category::Mathematics, 6.0, 110.0),
        trial(3, Category::Humanities, 7.0, 120.0)};
    std::vector<scoring::QualityProfile> profiles = {profile(1, 8.0), profile(2, 8.5),
                                                     profile(3, 9.0)};
    auto rows = build_analysis(trials, profiles);
    auto summaries = per_category(rows, MetricField::Latency);
    REQUIRE(summaries.size() == 2);
    CHECK(summaries[0].config_id == "cfg/Mathematics");
    CHECK(summaries[0].n == 1);
    CHECK(summaries[1].config_id == "cfg/Humanities");
    CHECK(summaries[1].mean == doctest::Approx(6.0));
}

TEST_CASE("barrier_analysis counts strict exceedance and floors interactions") {
    std::vector<TrialRecord> trials;
    for (int i = 1; i <= 4; ++i) trials.push_back(trial(i, Category::Science, 5.0 + i, 1882.0));
    // latencies 6,7,8,9
    std::vector<double> thresholds = {7.0, 10.0};
    auto rep = barrier_analysis(trials, thresholds, 50.0);
    CHECK(rep.exceed_counts[0] == 2);  // strictly greater than 7
    CHECK(rep.exceed_fractions[0] == doctest::Approx(0.5));
    CHECK(rep.exceed_counts[1] == 0);
    CHECK(rep.mean_net_j == doctest::Approx(1882.0));
    CHECK(rep.interactions_per_charge == 95);  // floor(180000 / 1882)
}

TEST_CASE("barrier_analysis guards inputs") {
    std::vector<TrialRecord> empty;
    std::vector<double> thresholds = {10.0};
    CHECK_THROWS_AS(barrier_analysis(empty, thresholds, 50.0), InsufficientDataError);
    std::vector<TrialRecord> one = {trial(1, Category::Science, 5.0, 100.0)};
    CHECK_THROWS_AS(barrier_analysis(one, thresholds, 0.0), SchemaError);
}

namespace {
MetricSummary summary_of(double mean) {
    MetricSummary s;
    s.config_id = "cfg";
    s.metric = "lpw";
    s.mean = mean;
    s.n = 1;
    return s;
}
}  // namespace

TEST_CASE("regime_comparison reproduces the published aggregate ratios") {
    auto r = regime_comparison(summary_of(2.50e-3), summary_of(7.47e-4), summary_of(1.88e-3),
                               summary_of(8.49e-5));
    CHECK(r.improvement_a == doctest::Approx(3.35).epsilon(5e-3));
    CHECK(r.improvement_b == doctest::Approx(22.1).epsilon(5e-3));
    CHECK(r.off_ratio_ab == doctest::Approx(8.80).epsilon(5e-3));
    CHECK(r.on_ratio_ab == doctest::Approx(1.33).epsilon(5e-3));
}

TEST_CASE("regime_comparison: identical summaries give unit ratios") {
    auto r = regime_comparison(summary_of(1.0), summary_of(1.0), summary_of(1.0), summary_of(1.0));
    CHECK(r.on_ratio_ab == doctest::Approx(1.0));
    CHECK(r.off_ratio_ab == doctest::Approx(1.0));
    CHECK(r.improvement_a == doctest::Approx(1.0));
    CHECK(r.improvement_b == doctest::Approx(1.0));
}

TEST_CASE("regime_comparison rejects zero denominators") {
    CHECK_THROWS_AS(regime_comparison(summary_of(1.0), summary_of(0.0), summary_of(1.0),
                                      summary_of(1.0)),
                    SchemaError);
}

TEST_CASE("histogram bins cover the range, extremes included") {
    std::vector<double> v = {1, 2, 3, 4, 5};
    auto h = histogram(v, 4);
    CHECK(h.lo == 1);
    CHECK(h.hi == 5);
    long total = 0;
    for (long c : h.counts) total += c;
    CHECK(total == 5);
    CHECK(h.counts.back() >= 1);  // max value lands in the last bin
}
