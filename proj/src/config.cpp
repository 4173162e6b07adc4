#include "lpw/config.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "lpw/csv.hpp"
#include "lpw/energy.hpp"
#include "lpw/errors.hpp"

namespace lpw::config {

namespace {

constexpr const char* kModule = "config";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string& v, const std::string& key) {
    return csv::parse_double(v, kModule, "key '" + key + "'");
}

void apply_config_key(ConfigDescriptor& c, std::map<std::string, std::string>& idle_raw,
                      const std::string& key, const std::string& value) {
    if (key == "config_id") {
        c.config_id = value;
    } else if (key == "precision") {
        auto p = parse_precision(value);
        if (!p) throw SchemaError(kModule, "unknown precision '" + value + "'");
        c.precision = *p;
    } else if (key == "cache_regime") {
        auto r = parse_cache_regime(value);
        if (!r) throw SchemaError(kModule, "unknown cache_regime '" + value + "'");
        c.cache_regime = *r;
    } else if (key == "hardware") {
        c.hardware = value;
    } else if (key == "idle_power_w" || key == "e_idle_kwh" || key == "t_idle_s") {
        idle_raw[key] = value;
    } else {
        throw SchemaError(kModule, "unknown configuration key '" + key + "'");
    }
}

void finish_idle(ConfigDescriptor& c, const std::map<std::string, std::string>& idle_raw) {
    auto p = idle_raw.find("idle_power_w");
    auto e = idle_raw.find("e_idle_kwh");
    auto t = idle_raw.find("t_idle_s");
    if (p != idle_raw.end()) {
        c.idle_power_w = to_double(p->second, "idle_power_w");
        if (c.idle_power_w < 0)
            throw SchemaError(kModule, "config '" + c.config_id + "': idle_power_w must be >= 0");
    } else if (e != idle_raw.end() && t != idle_raw.end()) {
        c.idle_power_w = energy::calibrate_idle(to_double(e->second, "e_idle_kwh"),
                                                to_double(t->second, "t_idle_s"))
                             .p_idle_w;
    } else if (e != idle_raw.end() || t != idle_raw.end()) {
        throw SchemaError(kModule,
                          "config '" + c.config_id + "': e_idle_kwh and t_idle_s must appear together");
    }
}

}  // namespace

RunConfigFile read_config_file(const std::string& path) {
    const csv::KeyValues kv = csv::read_key_values(path, kModule);

    RunConfigFile out;
    // Single-config accumulator (bare keys).
    ConfigDescriptor bare;
    std::map<std::string, std::string> bare_idle;
    bool has_bare = false;

    // Prefixed accumulators, insertion-ordered.
    std::vector<std::string> config_order, scheme_order, scenario_order;
    std::map<std::string, ConfigDescriptor> configs;
    std::map<std::string, std::map<std::string, std::string>> config_idle;
    std::map<std::string, std::map<std::string, std::string>> schemes, scenarios_raw;

    for (const auto& [key, value] : kv.entries) {
        const auto parts = split(key, '.');
        if (parts.size() == 3 && parts[0] == "config") {
            if (!configs.count(parts[1])) {
                config_order.push_back(parts[1]);
                configs[parts[1]].config_id = parts[1];
            }
            apply_config_key(configs[parts[1]], config_idle[parts[1]], parts[2], value);
        } else if (parts.size() == 3 && parts[0] == "scheme") {
            if (!schemes.count(parts[1])) scheme_order.push_back(parts[1]);
            schemes[parts[1]][parts[2]] = value;
        } else if (parts.size() == 3 && parts[0] == "scenario") {
            if (!scenarios_raw.count(parts[1])) scenario_order.push_back(parts[1]);
            scenarios_raw[parts[1]][parts[2]] = value;
        } else if (parts.size() == 1) {
            has_bare = true;
            apply_config_key(bare, bare_idle, key, value);
        } else {
            throw SchemaError(kModule, path + ": unrecognized key '" + key + "'");
        }
    }

    if (has_bare) {
        if (bare.config_id.empty())
            throw SchemaError(kModule, path + ": bare configuration keys need a config_id");
        finish_idle(bare, bare_idle);
        out.configs.push_back(bare);
    }
    for (const auto& id : config_order) {
        finish_idle(configs[id], config_idle[id]);
        out.configs.push_back(configs[id]);
    }

    for (const auto& id : scheme_order) {
        const auto& raw = schemes[id];
        scoring::AggregationScheme s;
        s.id = id;
        if (auto it = raw.find("mode"); it != raw.end()) {
            if (it->second == "human_only") s.mode = scoring::AggregationMode::HumanOnly;
            else if (it->second == "ai_only") s.mode = scoring::AggregationMode::AiOnly;
            else if (it->second == "weighted") s.mode = scoring::AggregationMode::Weighted;
            else throw SchemaError(kModule, "scheme '" + id + "': unknown mode '" + it->second + "'");
        }
        if (auto it = raw.find("human_weight"); it != raw.end())
            s.human_weight = to_double(it->second, "human_weight");
        if (auto it = raw.find("weights"); it != raw.end()) {
            const auto parts = split(it->second, ',');
            if (parts.size() != 4)
                throw SchemaError(kModule, "scheme '" + id + "': weights must be a CA,CC,SQ,LA quadruple");
            for (std::size_t i = 0; i < 4; ++i)
                s.dimension_weights[i] = to_double(csv::trim(parts[i]), "weights");
        }
        s.validate();
        out.schemes.push_back(std::move(s));
    }

    for (const auto& id : scenario_order) {
        const auto& raw = scenarios_raw[id];
        scenarios::CloudScenario s;
        s.name = id;
        s.q_ped_assumed = 8.24;
        for (const auto& [k, v] : raw) {
            if (k == "energy_j") s.server_energy_j = to_double(v, "energy_j");
            else if (k == "latency_s") s.latency_s = to_double(v, "latency_s");
            else if (k == "q_ped") s.q_ped_assumed = to_double(v, "q_ped");
            else if (k == "source") s.source = v;
            else throw SchemaError(kModule, "scenario '" + id + "': unknown key '" + k + "'");
        }
        if (!(s.server_energy_j > 0) || !(s.latency_s > 0))
            throw SchemaError(kModule, "scenario '" + id + "': energy_j and latency_s are required and must be > 0");
        out.scenarios.push_back(std::move(s));
    }

    return out;
}

}  // namespace lpw::config
