#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpw/config.hpp"
#include "lpw/dataset.hpp"
#include "lpw/energy.hpp"
#include "lpw/report.hpp"

namespace lpw::pipeline {

struct InputFile {
    std::string config_id;
    std::string path;
};

// Everything a full audit run needs. Deliberately seed-free: there is no
// randomness anywhere in the pipeline.
struct RunConfig {
    std::vector<InputFile> trials;
    std::vector<InputFile> scores;
    std::string config_path;                       // optional key-value file
    std::vector<std::string> scheme_names;         // first entry is the primary scheme
    std::vector<double> thresholds_s{10, 15, 30};
    double battery_wh = 50.0;
    double clamp_floor_j = energy::kDefaultClampFloorJ;
    std::vector<std::string> sections;             // empty -> auto-select from inputs
    std::vector<std::string> scenario_names;       // empty -> presets + config scenarios
    std::string fixed_time;                        // empty -> wall clock (UTC ISO-8601)
};

inline const std::vector<std::string>& section_names() {
    static const std::vector<std::string> names = {
        "aggregate", "per_category", "weighting_sweep", "rater_sweep",
        "reliability", "inferential", "barrier", "regime", "scenarios"};
    return names;
}

struct AuditOutcome {
    report::AuditReport report;
    int exit_code = 0;  // 0 ok, 3 when every produced section came out empty
};

// Runs ingest -> energy accounting -> scoring -> metrics -> reliability ->
// paired stats -> barrier -> scenarios and assembles the report.
AuditOutcome cmd_audit(const RunConfig& run);

struct FileDiagnosis {
    std::string role;       // trials | scores | config
    std::string config_id;
    std::string path;
    bool ok = false;
    std::string message;    // first offending row / missing column on failure
};

// Schema check only; never mutates inputs.
std::vector<FileDiagnosis> cmd_validate(const RunConfig& run);

std::string current_utc_iso8601();

}  // namespace lpw::pipeline
