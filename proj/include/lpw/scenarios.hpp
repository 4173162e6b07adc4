#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpw::scenarios {

// A deployment hypothesis: server-side energy and client latency for one
// request, with an assumed quality score, evaluated to a single LpW point.
struct CloudScenario {
    std::string name;
    double server_energy_j = 0;
    double latency_s = 0;
    double q_ped_assumed = 0;
    std::string source;
};

// Built-in server-energy scenarios for a short (~200 token) prompt.
std::vector<CloudScenario> presets();

double cloud_lpw(const CloudScenario& s);

struct ScenarioComparison {
    std::string reference;  // e.g. a measured on-device configuration
    double ratio = 0;       // scenario lpw / reference lpw
    bool higher = false;    // ratio > 1
};

struct ScenarioEvaluation {
    CloudScenario scenario;
    double lpw = 0;
    std::vector<ScenarioComparison> comparisons;
};

ScenarioEvaluation evaluate_cloud(const CloudScenario& s,
                                  std::span<const std::pair<std::string, double>> references);

// Scales a batched server-energy estimate to a different batching assumption.
double batch_adjust(double server_energy_j, double batch_factor);

// Quantised-vs-full comparison when per-inference energy cannot be measured
// but both configurations run at the same sustained package power. The power
// cancels in the LpW ratio, leaving quality_ratio * (l_full/l_quant)^2.
struct PowerInvariantComparison {
    double l_full_s = 0, l_quant_s = 0;
    double quality_ratio = 1.0;  // quant/full
    double lpw_ratio = 0;        // quant advantage; independent of power
    // Illustrative absolute numbers, present only when a power was assumed.
    std::optional<double> assumed_power_w;
    std::optional<double> full_energy_j, quant_energy_j;
    std::optional<double> full_lpw, quant_lpw;
};

PowerInvariantComparison power_invariant_ratio(double l_full_s, double l_quant_s,
                                               double quality_ratio = 1.0,
                                               std::optional<double> assumed_power_w = {},
                                               double reference_q = 8.24);

}  // namespace lpw::scenarios
