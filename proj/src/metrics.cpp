#include "lpw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lpw/errors.hpp"

namespace lpw::metrics {

namespace {
constexpr const char* kModule = "metrics";
}

TrialMetrics trial_metrics(double q_ped, double net_j, double latency_s) {
    if (!(net_j > 0))
        throw SchemaError(kModule, "net_j must be positive (post-clamp)");
    if (!(latency_s > 0))
        throw SchemaError(kModule, "latency_s must be positive");
    if (!(q_ped > 0))
        throw SchemaError(kModule, "q_ped must be positive");
    TrialMetrics m;
    m.lpw = q_ped / (net_j * latency_s);
    m.qpj = q_ped / net_j;
    m.qps = q_ped / latency_s;
    m.lpw_geo = q_ped / std::sqrt(net_j * latency_s);
    return m;
}

double fixed_q_lpw(double net_j, double latency_s, double q_ref) {
    if (!(net_j > 0))
        throw SchemaError(kModule, "net_j must be positive (post-clamp)");
    if (!(latency_s > 0))
        throw SchemaError(kModule, "latency_s must be positive");
    if (q_ref < 0)
        throw SchemaError(kModule, "q_ref must be >= 0");
    return q_ref / (net_j * latency_s);
}

double percentile(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty())
        throw InsufficientDataError(kModule, "percentile of empty set");
    if (p <= 0) return sorted_values.front();
    if (p >= 1) return sorted_values.back();
    const double h = p * static_cast<double>(sorted_values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

MetricSummary summarize(std::span<const double> values, const std::string& config_id,
                        const std::string& metric) {
    if (values.empty())
        throw InsufficientDataError(kModule, "summarize: no values for " + metric +
                                                 " (config '" + config_id + "')");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    MetricSummary s;
    s.config_id = config_id;
    s.metric = metric;
    s.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.median = percentile(sorted, 0.5);
    s.p5 = percentile(sorted, 0.05);
    s.p25 = percentile(sorted, 0.25);
    s.p75 = percentile(sorted, 0.75);
    s.p95 = percentile(sorted, 0.95);
    s.min = sorted.front();
    s.max = sorted.back();
    return s;
}

std::string_view to_string(MetricField f) {
    switch (f) {
        case MetricField::Latency: return "latency_s";
        case MetricField::NetEnergy: return "net_j";
        case MetricField::QPed: return "q_ped";
        case MetricField::Lpw: return "lpw";
        case MetricField::Qpj: return "qpj";
        case MetricField::Qps: return "qps";
        case MetricField::LpwGeo: return "lpw_geo";
    }
    return "?";
}

std::vector<TrialAnalysis> build_analysis(std::span<const TrialRecord> trials,
                                          std::span<const scoring::QualityProfile> profiles) {
    std::map<int, const scoring::QualityProfile*> by_prompt;
    for (const auto& p : profiles) by_prompt[p.prompt_id] = &p;

    std::vector<TrialAnalysis> out;
    out.reserve(trials.size());
    for (const auto& t : trials) {
        if (!t.net_j)
            throw SchemaError(kModule, "trial prompt_id " + std::to_string(t.prompt_id) +
                                           " has no net_j; run energy accounting first");
        auto it = by_prompt.find(t.prompt_id);
        if (it == by_prompt.end())
            throw InsufficientDataError(kModule, "no quality profile for prompt_id " +
                                                     std::to_string(t.prompt_id) + " (config '" +
                                                     t.config_id + "')");
        TrialAnalysis a;
        a.config_id = t.config_id;
        a.prompt_id = t.prompt_id;
        a.category = t.category;
        a.latency_s = t.latency_s;
        a.net_j = *t.net_j;
        a.q_ped = it->second->q_ped;
        a.w = it->second->w;
        a.m = trial_metrics(a.q_ped, a.net_j, a.latency_s);
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const TrialAnalysis& a, const TrialAnalysis& b) {
        return a.prompt_id < b.prompt_id;
    });
    return out;
}

std::vector<double> select(std::span<const TrialAnalysis> rows, MetricField f) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        switch (f) {
            case MetricField::Latency: out.push_back(r.latency_s); break;
            case MetricField::NetEnergy: out.push_back(r.net_j); break;
            case MetricField::QPed: out.push_back(r.q_ped); break;
            case MetricField::Lpw: out.push_back(r.m.lpw); break;
            case MetricField::Qpj: out.push_back(r.m.qpj); break;
            case MetricField::Qps: out.push_back(r.m.qps); break;
            case MetricField::LpwGeo: out.push_back(r.m.lpw_geo); break;
        }
    }
    return out;
}

std::vector<MetricSummary> per_category(std::span<const TrialAnalysis> rows, MetricField f) {
    std::vector<MetricSummary> out;
    for (Category c : kCategories) {
        std::vector<TrialAnalysis> slice;
        for (const auto& r : rows)
            if (r.category == c) slice.push_back(r);
        if (slice.empty()) continue;
        MetricSummary s = summarize(select(slice, f),
                                    slice.front().config_id, std::string(to_string(f)));
        s.config_id += std::string("/") + std::string(to_string(c));
        out.push_back(std::move(s));
    }
    return out;
}

BarrierReport barrier_analysis(std::span<const TrialRecord> trials,
                               std::span<const double> thresholds_s, double battery_wh) {
    if (trials.empty())
        throw InsufficientDataError(kModule, "barrier analysis needs at least one trial");
    if (!(battery_wh > 0))
        throw SchemaError(kModule, "battery_wh must be > 0");

    BarrierReport r;
    r.battery_wh = battery_wh;
    r.n = static_cast<int>(trials.size());
    double net_sum = 0.0;
    for (const auto& t : trials) {
        if (!t.net_j)
            throw SchemaError(kModule, "trial prompt_id " + std::to_string(t.prompt_id) +
                                           " has no net_j; run energy accounting first");
        net_sum += *t.net_j;
    }
    r.mean_net_j = net_sum / static_cast<double>(trials.size());
    for (double th : thresholds_s) {
        int count = 0;
        for (const auto& t : trials)
            if (t.latency_s > th) ++count;  // "exceeds" is strictly greater
        r.thresholds_s.push_back(th);
        r.exceed_counts.push_back(count);
        r.exceed_fractions.push_back(static_cast<double>(count) / static_cast<double>(trials.size()));
    }
    r.interactions_per_charge =
        static_cast<long>(std::floor(battery_wh * 3600.0 / r.mean_net_j));
    return r;
}

RegimeRatios regime_comparison(const MetricSummary& on_a, const MetricSummary& off_a,
                               const MetricSummary& on_b, const MetricSummary& off_b) {
    for (const auto* s : {&on_a, &off_a, &on_b, &off_b})
        if (s->mean == 0.0)
            throw SchemaError(kModule, "regime comparison: zero mean for '" + s->config_id + "'");
    RegimeRatios r;
    r.metric = on_a.metric;
    r.on_ratio_ab = on_a.mean / on_b.mean;
    r.off_ratio_ab = off_a.mean / off_b.mean;
    r.improvement_a = on_a.mean / off_a.mean;
    r.improvement_b = on_b.mean / off_b.mean;
    return r;
}

Histogram histogram(std::span<const double> values, int bins) {
    if (values.empty())
        throw InsufficientDataError(kModule, "histogram of empty set");
    if (bins < 1)
        throw SchemaError(kModule, "histogram needs at least one bin");
    Histogram h;
    h.lo = *std::min_element(values.begin(), values.end());
    h.hi = *std::max_element(values.begin(), values.end());
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    if (h.hi == h.lo) {
        h.width = 0;
        h.counts[0] = static_cast<long>(values.size());
        return h;
    }
    h.width = (h.hi - h.lo) / bins;
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - h.lo) / h.width);
        if (idx >= h.counts.size()) idx = h.counts.size() - 1;  // v == max
        ++h.counts[idx];
    }
    return h;
}

}  // namespace lpw::metrics
