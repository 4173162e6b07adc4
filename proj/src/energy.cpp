#include "lpw/energy.hpp"

#include <algorithm>
#include <string>

#include "lpw/errors.hpp"

namespace lpw::energy {

namespace {
constexpr const char* kModule = "energy";
}

IdleCalibration calibrate_idle(double e_idle_kwh, double t_idle_s) {
    if (!(t_idle_s > 0))
        throw SchemaError(kModule, "idle window t_idle_s must be > 0");
    if (e_idle_kwh < 0)
        throw SchemaError(kModule, "idle energy e_idle_kwh must be >= 0");
    return {e_idle_kwh, t_idle_s, e_idle_kwh * kJoulesPerKwh / t_idle_s};
}

IdleCalibration calibration_from_power(double p_idle_w) {
    if (p_idle_w < 0)
        throw SchemaError(kModule, "idle power must be >= 0");
    // Synthesize a 1 s window so the calibration invariant still holds.
    return {p_idle_w / kJoulesPerKwh, 1.0, p_idle_w};
}

double gross_energy(double e_start_kwh, double e_end_kwh) {
    if (e_end_kwh < e_start_kwh)
        throw SchemaError(kModule, "e_end_kwh < e_start_kwh: cumulative counter must not decrease");
    return (e_end_kwh - e_start_kwh) * kJoulesPerKwh;
}

EnergyAccount net_energy(double gross_j, const IdleCalibration& cal, double latency_s,
                         double clamp_floor_j) {
    if (!(latency_s > 0))
        throw SchemaError(kModule, "latency_s must be > 0");
    if (gross_j < 0)
        throw SchemaError(kModule, "gross_j must be >= 0");
    EnergyAccount acct;
    acct.gross_j = gross_j;
    acct.idle_share_j = cal.p_idle_w * latency_s;
    const double raw = gross_j - acct.idle_share_j;
    acct.clamped = raw < clamp_floor_j;
    acct.net_j = acct.clamped ? clamp_floor_j : raw;
    return acct;
}

AccountingResult account_dataset(std::vector<TrialRecord> trials, const IdleCalibration& cal,
                                 double clamp_floor_j) {
    AccountingResult result;
    for (auto& t : trials) {
        if (t.net_j) {
            ++result.net_passthrough;
            if (*t.net_j < clamp_floor_j) {
                t.net_j = clamp_floor_j;
                ++result.clamped;
            }
            continue;
        }
        double gross;
        if (t.gross_j) {
            gross = *t.gross_j;
            ++result.derived_from_gross;
        } else if (t.e_start_kwh && t.e_end_kwh) {
            gross = gross_energy(*t.e_start_kwh, *t.e_end_kwh);
            ++result.derived_from_snapshots;
        } else {
            throw SchemaError(kModule, "trial prompt_id " + std::to_string(t.prompt_id) +
                                           " (config '" + t.config_id +
                                           "') carries no energy information; provide net_j, "
                                           "gross_j, or snapshot columns");
        }
        const EnergyAccount acct = net_energy(gross, cal, t.latency_s, clamp_floor_j);
        t.gross_j = acct.gross_j;
        t.net_j = acct.net_j;
        if (acct.clamped) ++result.clamped;
    }
    std::sort(trials.begin(), trials.end(), [](const TrialRecord& a, const TrialRecord& b) {
        return a.config_id != b.config_id ? a.config_id < b.config_id : a.prompt_id < b.prompt_id;
    });
    result.trials = std::move(trials);
    return result;
}

}  // namespace lpw::energy
