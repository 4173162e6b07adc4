#include "lpw/scenarios.hpp"

#include "lpw/errors.hpp"

namespace lpw::scenarios {

namespace {
constexpr const char* kModule = "scenarios";

void check_scenario(const CloudScenario& s) {
    if (!(s.server_energy_j > 0))
        throw SchemaError(kModule, "scenario '" + s.name + "': energy must be > 0");
    if (!(s.latency_s > 0))
        throw SchemaError(kModule, "scenario '" + s.name + "': latency must be > 0");
    if (!(s.q_ped_assumed > 0))
        throw SchemaError(kModule, "scenario '" + s.name + "': assumed quality must be > 0");
}
}  // namespace

std::vector<CloudScenario> presets() {
    // Server-energy range for a short instructional prompt, from the strict
    // client-side lower bound up to reasoning-heavy medium prompts.
    return {
        {"client_lower_bound", 1.0, 1.9, 8.24, "client-side measurement only"},
        {"gpt4o_short", 1550.0, 1.9, 8.24, "infrastructure-aware estimate, batch 8"},
        {"gpt4o_batch1", 2480.0, 1.9, 8.24, "batch-adjusted single-user estimate"},
        {"bloom_176b", 3384.0, 1.9, 8.24, "production measurement, 176B-class model"},
        {"gpt4o_medium", 34956.0, 1.9, 8.24, "medium-length prompt estimate"},
    };
}

double cloud_lpw(const CloudScenario& s) {
    check_scenario(s);
    return s.q_ped_assumed / (s.server_energy_j * s.latency_s);
}

ScenarioEvaluation evaluate_cloud(const CloudScenario& s,
                                  std::span<const std::pair<std::string, double>> references) {
    ScenarioEvaluation eval;
    eval.scenario = s;
    eval.lpw = cloud_lpw(s);
    for (const auto& [name, ref] : references) {
        if (ref == 0.0)
            throw SchemaError(kModule, "reference '" + name + "' has zero LpW");
        const double ratio = eval.lpw / ref;
        eval.comparisons.push_back({name, ratio, ratio > 1.0});
    }
    return eval;
}

double batch_adjust(double server_energy_j, double batch_factor) {
    if (!(server_energy_j > 0))
        throw SchemaError(kModule, "server energy must be > 0");
    if (!(batch_factor > 0))
        throw SchemaError(kModule, "batch factor must be > 0");
    return server_energy_j * batch_factor;
}

PowerInvariantComparison power_invariant_ratio(double l_full_s, double l_quant_s,
                                               double quality_ratio,
                                               std::optional<double> assumed_power_w,
                                               double reference_q) {
    if (!(l_full_s > 0) || !(l_quant_s > 0))
        throw SchemaError(kModule, "latencies must be > 0");
    if (!(quality_ratio > 0))
        throw SchemaError(kModule, "quality ratio must be > 0");

    PowerInvariantComparison c;
    c.l_full_s = l_full_s;
    c.l_quant_s = l_quant_s;
    c.quality_ratio = quality_ratio;
    // The shared power term never enters this path.
    const double latency_ratio = l_full_s / l_quant_s;
    c.lpw_ratio = quality_ratio * latency_ratio * latency_ratio;

    if (assumed_power_w) {
        if (!(*assumed_power_w > 0))
            throw SchemaError(kModule, "assumed power must be > 0");
        c.assumed_power_w = assumed_power_w;
        c.full_energy_j = *assumed_power_w * l_full_s;
        c.quant_energy_j = *assumed_power_w * l_quant_s;
        c.full_lpw = reference_q / (*c.full_energy_j * l_full_s);
        c.quant_lpw = reference_q * quality_ratio / (*c.quant_energy_j * l_quant_s);
    }
    return c;
}

}  // namespace lpw::scenarios
