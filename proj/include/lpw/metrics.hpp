#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpw/dataset.hpp"
#include "lpw/scoring.hpp"

namespace lpw::metrics {

// Composite per-trial metrics. lpw = q/(E*L); the alternates isolate the
// energy-only, latency-only, and geometric-mean views of the same trade-off.
struct TrialMetrics {
    double lpw = 0.0;      // (J*s)^-1
    double qpj = 0.0;      // J^-1
    double qps = 0.0;      // s^-1
    double lpw_geo = 0.0;  // (J*s)^-1/2
};

TrialMetrics trial_metrics(double q_ped, double net_j, double latency_s);

// LpW with a fixed reference quality: isolates system-level efficiency when
// comparing models whose responses were not all scored.
double fixed_q_lpw(double net_j, double latency_s, double q_ref);

struct MetricSummary {
    std::string config_id;
    std::string metric;
    double mean = 0, median = 0, p5 = 0, p25 = 0, p75 = 0, p95 = 0;
    double min = 0, max = 0;
    int n = 0;
};

// Percentiles by linear interpolation between closest order statistics.
// The aggregate mean is the mean of per-trial values, not a ratio of means.
MetricSummary summarize(std::span<const double> values, const std::string& config_id,
                        const std::string& metric);
double percentile(std::span<const double> sorted_values, double p);  // p in [0,1]

// One trial with quality attached and all composite metrics evaluated.
struct TrialAnalysis {
    std::string config_id;
    int prompt_id = 0;
    Category category = Category::Mathematics;
    double latency_s = 0, net_j = 0, q_ped = 0;
    std::array<double, 4> w{};  // weighted dimension scores, CA..LA
    TrialMetrics m;
};

// Joins accounted trials with quality profiles on prompt_id (trials must have
// net_j filled). Prompts missing a profile raise an error naming the id.
std::vector<TrialAnalysis> build_analysis(std::span<const TrialRecord> trials,
                                          std::span<const scoring::QualityProfile> profiles);

enum class MetricField { Latency, NetEnergy, QPed, Lpw, Qpj, Qps, LpwGeo };
std::string_view to_string(MetricField f);
std::vector<double> select(std::span<const TrialAnalysis> rows, MetricField f);

// Summaries per category in canonical order; absent categories are skipped.
std::vector<MetricSummary> per_category(std::span<const TrialAnalysis> rows, MetricField f);

struct BarrierReport {
    std::vector<double> thresholds_s;
    std::vector<int> exceed_counts;       // latency strictly greater than threshold
    std::vector<double> exceed_fractions;
    double battery_wh = 0;
    double mean_net_j = 0;
    long interactions_per_charge = 0;     // floor(battery_wh * 3600 / mean net_j)
    int n = 0;
};

BarrierReport barrier_analysis(std::span<const TrialRecord> trials,
                               std::span<const double> thresholds_s, double battery_wh);

// Cross-regime ratio table for one metric over a 2x2 of
// (config A, config B) x (regime ON, regime OFF), computed from summary means.
struct RegimeRatios {
    std::string metric;
    double on_ratio_ab = 0;      // A/B within ON
    double off_ratio_ab = 0;     // A/B within OFF
    double improvement_a = 0;    // ON/OFF within A
    double improvement_b = 0;    // ON/OFF within B
};

RegimeRatios regime_comparison(const MetricSummary& on_a, const MetricSummary& off_a,
                               const MetricSummary& on_b, const MetricSummary& off_b);

// Equal-width bin counts for external plotting.
struct Histogram {
    double lo = 0, hi = 0, width = 0;
    std::vector<long> counts;
};

Histogram histogram(std::span<const double> values, int bins);

}  // namespace lpw::metrics
