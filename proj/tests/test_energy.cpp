#include <doctest.h>

#include "lpw/energy.hpp"
#include "lpw/errors.hpp"

using namespace lpw;
using namespace lpw::energy;

TEST_CASE("calibrate_idle inverts kWh over a window to Watts") {
    // 2.269e-4 kWh over 10 s: 2.269e-4 * 3.6e6 / 10
    auto cal = calibrate_idle(2.269e-4, 10.0);
    CHECK(cal.p_idle_w == doctest::Approx(81.7).epsilon(1e-3));
    CHECK(cal.p_idle_w == doctest::Approx(2.269e-4 * 3.6e6 / 10.0));
}

TEST_CASE("calibrate_idle zero energy gives zero power") {
    CHECK(calibrate_idle(0.0, 10.0).p_idle_w == 0.0);
}

TEST_CASE("calibrate_idle guards the division") {
    CHECK_THROWS_AS(calibrate_idle(1e-4, 0.0), SchemaError);
    CHECK_THROWS_AS(calibrate_idle(-1e-4, 10.0), SchemaError);
}

TEST_CASE("gross_energy converts a snapshot delta to Joules") {
    CHECK(gross_energy(0.001000, 0.001102) == doctest::Approx(367.2).epsilon(1e-9));
    CHECK(gross_energy(0.5, 0.5) == 0.0);
    CHECK_THROWS_AS(gross_energy(0.001102, 0.001000), SchemaError);
}

TEST_CASE("net_energy subtracts the idle share") {
    auto cal = calibration_from_power(81.7);
    auto acct = net_energy(367.2, cal, 3.0);
    CHECK(acct.idle_share_j == doctest::Approx(245.1));
    CHECK(acct.net_j == doctest::Approx(122.1).epsilon(1e-9));
    CHECK(!acct.clamped);
}

TEST_CASE("net_energy clamps a negative subtraction to the floor") {
    auto cal = calibration_from_power(81.7);
    auto acct = net_energy(100.0, cal, 1.5);  // raw: 100 - 122.55 = -22.55
    CHECK(acct.net_j == doctest::Approx(0.01));
    CHECK(acct.clamped);
}

TEST_CASE("net_energy with zero idle power returns gross") {
    auto acct = net_energy(250.0, calibration_from_power(0.0), 2.0);
    CHECK(acct.net_j == doctest::Approx(250.0));
    CHECK(!acct.clamped);
}

TEST_CASE("net_energy honours a custom clamp floor") {
    auto acct = net_energy(1.0, calibration_from_power(10.0), 1.0, 0.5);
    CHECK(acct.net_j == doctest::Approx(0.5));
    CHECK(acct.clamped);
}

TEST_CASE("net_energy rejects bad domains") {
    auto cal = calibration_from_power(10.0);
    CHECK_THROWS_AS(net_energy(10.0, cal, 0.0), SchemaError);
    CHECK_THROWS_AS(net_energy(-1.0, cal, 1.0), SchemaError);
}

namespace {
TrialRecord make_trial(int prompt, double latency) {
    TrialRecord t;
    t.config_id = "cfg";
    t.prompt_id = prompt;
    t.latency_s = latency;
    return t;
}
}  // namespace

TEST_CASE("account_dataset keeps provided net verbatim") {
    auto t = make_trial(1, 9.3);
    t.net_j = 372.9;
    auto result = account_dataset({t}, calibration_from_power(81.7));
    CHECK(result.trials[0].net_j == doctest::Approx(372.9));
    CHECK(result.net_passthrough == 1);
    CHECK(result.clamped == 0);
}

TEST_CASE("account_dataset derives from snapshots via gross and net") {
    auto t = make_trial(1, 3.0);
    t.e_start_kwh = 0.001000;
    t.e_end_kwh = 0.001102;
    auto result = account_dataset({t}, calibration_from_power(81.7));
    CHECK(result.trials[0].gross_j == doctest::Approx(367.2));
    CHECK(result.trials[0].net_j == doctest::Approx(122.1));
    CHECK(result.derived_from_snapshots == 1);
}

TEST_CASE("account_dataset prefers net over gross over snapshots") {
    auto t = make_trial(1, 3.0);
    t.e_start_kwh = 0.001000;
    t.e_end_kwh = 0.001102;
    t.gross_j = 500.0;
    t.net_j = 42.0;
    auto result = account_dataset({t}, calibration_from_power(81.7));
    CHECK(result.trials[0].net_j == doctest::Approx(42.0));
    CHECK(result.trials[0].gross_j == doctest::Approx(500.0));  // untouched
}

TEST_CASE("account_dataset errors on a trial with no energy information") {
    auto t = make_trial(17, 3.0);
    CHECK_THROWS_WITH_AS(account_dataset({t}, calibration_from_power(81.7)),
                         doctest::Contains("17"), SchemaError);
}

TEST_CASE("account_dataset orders output by (config_id, prompt_id)") {
    auto a = make_trial(2, 1.0);
    auto b = make_trial(1, 1.0);
    a.net_j = 1.0;
    b.net_j = 1.0;
    b.config_id = "zzz";
    auto result = account_dataset({a, b}, calibration_from_power(0.0));
    CHECK(result.trials[0].config_id == "cfg");
    CHECK(result.trials[1].config_id == "zzz");
}

TEST_CASE("net_energy is non-increasing in idle power") {
    double prev = 1e300;
    for (double p : {0.0, 10.0, 40.0, 81.7, 200.0}) {
        const double net = net_energy(400.0, calibration_from_power(p), 3.0).net_j;
        CHECK(net <= prev);
        prev = net;
    }
}

TEST_CASE("gross_energy is additive over adjacent intervals") {
    const double a = 0.0010, b = 0.0017, c = 0.0031;
    const double lhs = gross_energy(a, b) + gross_energy(b, c);
    const double rhs = gross_energy(a, c);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("Joule/kWh unit round-trip is identity") {
    const double net = 372.9;
    const double back = (net / kJoulesPerKwh) * kJoulesPerKwh;
    CHECK(back == doctest::Approx(net).epsilon(1e-12));
}
