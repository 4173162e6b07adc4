#pragma once

#include <string>
#include <vector>

#include "lpw/dataset.hpp"
#include "lpw/scenarios.hpp"
#include "lpw/scoring.hpp"

namespace lpw::config {

// Parsed run-configuration file: configuration descriptors plus optional
// named aggregation schemes and cloud scenarios.
//
//   # single-config form
//   config_id = FP16
//   precision = FP16
//   cache_regime = cache_on
//   hardware = example GPU
//   idle_power_w = 81.7            # or e_idle_kwh + t_idle_s
//
//   # multi-config form
//   config.NF4.precision = NF4
//   config.NF4.idle_power_w = 81.7
//
//   scheme.custom.human_weight = 0.6
//   scheme.custom.weights = 0.25,0.25,0.25,0.25
//   scheme.custom.mode = weighted
//
//   scenario.big_server.energy_j = 3384
//   scenario.big_server.latency_s = 1.9
//   scenario.big_server.q_ped = 8.24
//   scenario.big_server.source = literature
struct RunConfigFile {
    std::vector<ConfigDescriptor> configs;
    std::vector<scoring::AggregationScheme> schemes;
    std::vector<scenarios::CloudScenario> scenarios;
};

RunConfigFile read_config_file(const std::string& path);

}  // namespace lpw::config
