#pragma once

#include <span>
#include <vector>

#include "lpw/dataset.hpp"

namespace lpw::energy {

inline constexpr double kJoulesPerKwh = 3.6e6;
inline constexpr double kDefaultClampFloorJ = 0.01;

// Idle baseline: P_idle = E_idle[kWh] * 3.6e6 / T_idle[s].
struct IdleCalibration {
    double e_idle_kwh = 0.0;
    double t_idle_s = 1.0;
    double p_idle_w = 0.0;
};

IdleCalibration calibrate_idle(double e_idle_kwh, double t_idle_s);

// For configurations where idle power was measured directly.
IdleCalibration calibration_from_power(double p_idle_w);

// (e_end - e_start) kWh converted to Joules. e_end must be >= e_start.
double gross_energy(double e_start_kwh, double e_end_kwh);

struct EnergyAccount {
    double gross_j = 0.0;
    double idle_share_j = 0.0;  // P_idle * latency
    double net_j = 0.0;         // >= clamp floor
    bool clamped = false;
};

// net = max(gross - P_idle * latency, clamp_floor). Short latencies can make
// the subtraction go slightly negative; the floor keeps downstream ratios
// well-defined and the flag records each occurrence.
EnergyAccount net_energy(double gross_j, const IdleCalibration& cal, double latency_s,
                         double clamp_floor_j = kDefaultClampFloorJ);

struct AccountingResult {
    std::vector<TrialRecord> trials;  // ordered by (config_id, prompt_id)
    int clamped = 0;
    int derived_from_snapshots = 0;
    int derived_from_gross = 0;
    int net_passthrough = 0;
};

// Fills gross_j/net_j for every trial. Precedence: provided net_j is kept
// verbatim (floored if below clamp), else net is computed from provided or
// snapshot-derived gross. A trial with no energy information is an error.
AccountingResult account_dataset(std::vector<TrialRecord> trials, const IdleCalibration& cal,
                                 double clamp_floor_j = kDefaultClampFloorJ);

}  // namespace lpw::energy
