// lpw-audit: command-line audit pipeline for inference energy, latency, and
// rated response quality. See README.md for file formats and examples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpw/config.hpp"
#include "lpw/csv.hpp"
#include "lpw/dataset.hpp"
#include "lpw/energy.hpp"
#include "lpw/errors.hpp"
#include "lpw/inferstat.hpp"
#include "lpw/metrics.hpp"
#include "lpw/pipeline.hpp"
#include "lpw/reliability.hpp"
#include "lpw/report.hpp"
#include "lpw/scenarios.hpp"
#include "lpw/scoring.hpp"

namespace {

using lpw::report::Cell;
using lpw::report::Table;

// "ID=path" or bare path (config id defaults to the file stem).
lpw::pipeline::InputFile parse_input(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq != std::string::npos && eq > 0)
        return {arg.substr(0, eq), arg.substr(eq + 1)};
    std::string stem = arg;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0)
        stem = stem.substr(0, dot);
    return {stem, arg};
}

std::vector<lpw::pipeline::InputFile> parse_inputs(const std::vector<std::string>& args) {
    std::vector<lpw::pipeline::InputFile> out;
    for (const auto& a : args) out.push_back(parse_input(a));
    return out;
}

void emit(const lpw::report::AuditReport& rep, lpw::report::Format format,
          const std::string& out_path) {
    const std::string text = lpw::report::render(rep, format);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw lpw::IoError("cli", "cannot open output file: " + out_path);
    f << text;
}

lpw::report::AuditReport wrap_tables(std::vector<Table> tables, const std::string& fixed_time) {
    lpw::report::AuditReport rep;
    rep.generated_at = fixed_time.empty() ? lpw::pipeline::current_utc_iso8601() : fixed_time;
    rep.fingerprint = "none";
    rep.sections = std::move(tables);
    return rep;
}

struct CommonFlags {
    std::vector<std::string> trials, scores;
    std::string config_path;
    std::string format = "table";
    std::string out_path;
    std::string fixed_time;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_inputs = true) {
    if (with_inputs) {
        cmd->add_option("--trials", f.trials,
                        "Trial telemetry CSV, as CONFIG_ID=path (repeatable)");
        cmd->add_option("--scores", f.scores, "Score matrix CSV, as CONFIG_ID=path (repeatable)");
        cmd->add_option("--config", f.config_path,
                        "Key-value config file (descriptors, schemes, scenarios)");
    }
    cmd->add_option("--format", f.format, "Output format: table, csv, json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--out", f.out_path, "Write the report to this path instead of stdout");
    cmd->add_option("--fixed-time", f.fixed_time,
                    "Timestamp to embed instead of the wall clock (for reproducible output)");
}

lpw::scoring::AggregationScheme resolve_scheme(const std::string& name,
                                               const std::string& config_path) {
    if (!config_path.empty()) {
        for (const auto& s : lpw::config::read_config_file(config_path).schemes)
            if (s.id == name) return s;
    }
    return lpw::scoring::preset(name);
}

// --- subcommand bodies -------------------------------------------------------

int run_validate(const CommonFlags& f) {
    lpw::pipeline::RunConfig run;
    run.trials = parse_inputs(f.trials);
    run.scores = parse_inputs(f.scores);
    run.config_path = f.config_path;
    const auto results = lpw::pipeline::cmd_validate(run);
    if (results.empty())
        throw lpw::UsageError("cli", "nothing to validate; pass --trials/--scores/--config");
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.ok ? "pass" : "FAIL") << "  " << r.role << "  " << r.path;
        if (!r.ok) std::cout << "\n      " << r.message;
        std::cout << "\n";
        all_ok &= r.ok;
    }
    return all_ok ? 0 : 2;
}

int run_energy(const CommonFlags& f, double e_idle_kwh, double t_idle_s, bool calibrate,
               const std::string& tracker_log, double clamp_floor) {
    if (calibrate) {
        const auto cal = lpw::energy::calibrate_idle(e_idle_kwh, t_idle_s);
        std::printf("e_idle_kwh   %.10g\n", cal.e_idle_kwh);
        std::printf("t_idle_s     %.10g\n", cal.t_idle_s);
        std::printf("p_idle_w     %.10g\n", cal.p_idle_w);
        return 0;
    }
    if (!tracker_log.empty()) {
        const auto intervals = lpw::read_tracker_log(tracker_log);
        std::cout << "t_start_s,t_end_s,e_start_kwh,e_end_kwh\n";
        for (const auto& iv : intervals)
            std::printf("%.10g,%.10g,%.17g,%.17g\n", iv.t_start_s, iv.t_end_s, iv.e_start_kwh,
                        iv.e_end_kwh);
        return 0;
    }
    if (f.trials.empty())
        throw lpw::UsageError("cli", "energy: pass --trials, --tracker-log, or --calibrate");
    if (!f.out_path.empty() && f.trials.size() != 1)
        throw lpw::UsageError("cli", "energy: --out writes accounted trials for one --trials input");

    lpw::config::RunConfigFile cfg;
    if (!f.config_path.empty()) cfg = lpw::config::read_config_file(f.config_path);

    Table t;
    t.id = "energy";
    t.title = "Energy accounting summary";
    t.source_module = "energy";
    t.columns = {"config", "n", "idle_power_w", "mean_gross_j", "mean_net_j", "clamped"};
    for (const auto& in : parse_inputs(f.trials)) {
        double idle_w = 0;
        for (const auto& d : cfg.configs)
            if (d.config_id == in.config_id) idle_w = d.idle_power_w;
        auto acct = lpw::energy::account_dataset(lpw::ingest_trials(in.path, in.config_id),
                                                 lpw::energy::calibration_from_power(idle_w),
                                                 clamp_floor);
        double gross = 0, net = 0;
        int n_gross = 0;
        for (const auto& tr : acct.trials) {
            if (tr.gross_j) {
                gross += *tr.gross_j;
                ++n_gross;
            }
            net += *tr.net_j;
        }
        const double n = static_cast<double>(acct.trials.size());
        t.rows.push_back({Cell::str(in.config_id), Cell::integer(acct.trials.size()),
                          Cell::of(idle_w, Cell::Kind::Watts),
                          n_gross ? Cell::of(gross / n_gross, Cell::Kind::Joules)
                                  : Cell::str("-"),  // net-only inputs carry no gross
                          Cell::of(n ? net / n : 0, Cell::Kind::Joules),
                          Cell::integer(acct.clamped)});
        if (!f.out_path.empty()) {
            std::ofstream out(f.out_path, std::ios::binary);
            if (!out) throw lpw::IoError("cli", "cannot open output file: " + f.out_path);
            lpw::write_trials_csv(out, acct.trials);
        }
    }
    // Summary always goes to stdout; --out holds the accounted trials CSV.
    emit(wrap_tables({t}, f.fixed_time), lpw::report::parse_format(f.format), "");
    return 0;
}

int run_scores(const CommonFlags& f, const std::vector<std::string>& scheme_names) {
    if (f.scores.empty()) throw lpw::UsageError("cli", "scores: pass --scores");
    std::vector<lpw::ScoreMatrix> matrices;
    for (const auto& in : parse_inputs(f.scores))
        matrices.push_back(lpw::ingest_scores(in.path, in.config_id));

    std::vector<lpw::scoring::AggregationScheme> schemes;
    if (scheme_names.empty()) {
        schemes = lpw::scoring::weighting_presets();
        for (auto& s : lpw::scoring::rater_mode_presets()) schemes.push_back(s);
    } else {
        for (const auto& n : scheme_names) schemes.push_back(resolve_scheme(n, f.config_path));
    }

    Table t;
    t.id = "scheme_sweep";
    t.title = "Mean quality per aggregation scheme";
    t.source_module = "scoring";
    t.columns = {"scheme", "config", "n", "mean_q_ped"};
    for (const auto& row : lpw::scoring::scheme_sweep(matrices, schemes))
        t.rows.push_back({Cell::str(row.scheme_id), Cell::str(row.config_id),
                          Cell::integer(row.n_prompts), Cell::of(row.mean_q_ped, Cell::Kind::Score)});
    emit(wrap_tables({t}, f.fixed_time), lpw::report::parse_format(f.format), f.out_path);
    return 0;
}

int run_reliability(const CommonFlags& f) {
    if (f.scores.empty()) throw lpw::UsageError("cli", "reliability: pass --scores");
    lpw::pipeline::RunConfig run;
    run.scores = parse_inputs(f.scores);
    run.config_path = f.config_path;
    run.sections = {"reliability"};
    run.fixed_time = f.fixed_time;
    auto outcome = lpw::pipeline::cmd_audit(run);
    emit(outcome.report, lpw::report::parse_format(f.format), f.out_path);
    return outcome.exit_code;
}

int run_compare(const CommonFlags& f, const std::string& metric, const std::string& by,
                const std::string& scheme_name, double clamp_floor) {
    if (f.trials.size() != 2 || f.scores.size() != 2)
        throw lpw::UsageError("cli",
                              "compare: pass exactly two --trials and two --scores inputs");

    lpw::config::RunConfigFile cfg;
    if (!f.config_path.empty()) cfg = lpw::config::read_config_file(f.config_path);
    const auto scheme = resolve_scheme(scheme_name, f.config_path);

    std::vector<std::vector<lpw::metrics::TrialAnalysis>> analysis;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto ti = parse_input(f.trials[i]);
        const auto si = parse_input(f.scores[i]);
        double idle_w = 0;
        for (const auto& d : cfg.configs)
            if (d.config_id == ti.config_id) idle_w = d.idle_power_w;
        auto acct = lpw::energy::account_dataset(lpw::ingest_trials(ti.path, ti.config_id),
                                                 lpw::energy::calibration_from_power(idle_w),
                                                 clamp_floor);
        const auto matrix = lpw::ingest_scores(si.path, si.config_id);
        analysis.push_back(lpw::metrics::build_analysis(
            acct.trials, lpw::scoring::quality_profiles(matrix, scheme)));
    }

    std::map<int, const lpw::metrics::TrialAnalysis*> bm;
    for (const auto& x : analysis[1]) bm[x.prompt_id] = &x;
    std::vector<std::pair<lpw::metrics::TrialAnalysis, lpw::metrics::TrialAnalysis>> pairs;
    for (const auto& x : analysis[0])
        if (auto it = bm.find(x.prompt_id); it != bm.end()) pairs.emplace_back(x, *it->second);
    if (pairs.empty()) throw lpw::InsufficientDataError("dataset", "no common prompt_ids");

    lpw::inferstat::ValueSelector sel;
    if (metric == "q_ped") sel = lpw::inferstat::ValueSelector::QPed;
    else if (metric == "latency") sel = lpw::inferstat::ValueSelector::Latency;
    else if (metric == "energy") sel = lpw::inferstat::ValueSelector::NetEnergy;
    else if (metric == "lpw") sel = lpw::inferstat::ValueSelector::Lpw;
    else throw lpw::UsageError("cli", "unknown metric '" + metric + "'");

    Table t;
    t.id = "compare";
    t.title = "Paired comparison (" + parse_input(f.trials[0]).config_id + " - " +
              parse_input(f.trials[1]).config_id + ")";
    t.source_module = "inferstat";
    t.columns = {"label", "n", "delta", "t", "df", "p", "d", "W", "p_w"};
    std::vector<std::string> warnings;
    int degenerate_rows = 0;
    auto add = [&](lpw::inferstat::Grouping g) {
        auto res = lpw::inferstat::compare_slices(pairs, sel, g);
        warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
        for (const auto& c : res.rows) {
            if (c.degenerate) ++degenerate_rows;
            auto opt = [&](const std::optional<double>& v, Cell::Kind k) {
                return v ? Cell::of(*v, k) : Cell::na();
            };
            t.rows.push_back({Cell::str(c.label), Cell::integer(c.n_pairs),
                              Cell::of(c.mean_diff, Cell::Kind::Generic),
                              opt(c.t, Cell::Kind::Generic), Cell::integer(c.df),
                              opt(c.p_two_sided, Cell::Kind::Probability),
                              opt(c.cohens_d, Cell::Kind::Ratio),
                              opt(c.wilcoxon_w, Cell::Kind::Generic),
                              opt(c.wilcoxon_p, Cell::Kind::Probability)});
        }
    };
    if (by == "overall" || by == "all") add(lpw::inferstat::Grouping::Overall);
    if (by == "dimension" || by == "all") add(lpw::inferstat::Grouping::PerDimension);
    if (by == "category" || by == "all") add(lpw::inferstat::Grouping::PerCategory);
    if (t.rows.empty() && !(by == "overall" || by == "dimension" || by == "category" || by == "all"))
        throw lpw::UsageError("cli", "unknown grouping '" + by + "'");

    t.notes.push_back(
        "two-sided tests; wilcoxon drops zero differences and midranks ties "
        "(exact distribution up to n=25, tie-corrected normal above)");
    const bool all_degenerate =
        !t.rows.empty() && degenerate_rows == static_cast<int>(t.rows.size());
    if (all_degenerate)
        warnings.push_back("every comparison is degenerate (zero-variance differences)");
    auto rep = wrap_tables({t}, f.fixed_time);
    rep.warnings = warnings;
    emit(rep, lpw::report::parse_format(f.format), f.out_path);
    return all_degenerate ? 4 : 0;
}

int run_barrier(const CommonFlags& f, const std::vector<double>& thresholds, double battery_wh,
                double clamp_floor) {
    if (f.trials.empty()) throw lpw::UsageError("cli", "barrier: pass --trials");
    lpw::pipeline::RunConfig run;
    run.trials = parse_inputs(f.trials);
    run.config_path = f.config_path;
    run.thresholds_s = thresholds;
    run.battery_wh = battery_wh;
    run.clamp_floor_j = clamp_floor;
    run.sections = {"barrier"};
    run.fixed_time = f.fixed_time;
    auto outcome = lpw::pipeline::cmd_audit(run);
    emit(outcome.report, lpw::report::parse_format(f.format), f.out_path);
    return outcome.exit_code;
}

int run_scenarios(const CommonFlags& f, const std::vector<std::string>& names,
                  const std::vector<std::string>& reference_args,
                  const std::vector<std::string>& fixed_q_args,
                  const std::vector<double>& power_invariant, double assumed_power,
                  double quality_ratio) {
    std::vector<Table> tables;

    std::vector<std::pair<std::string, double>> references;
    for (const auto& arg : reference_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos)
            throw lpw::UsageError("cli", "--reference expects NAME=LPW");
        references.emplace_back(arg.substr(0, eq),
                                lpw::csv::parse_double(arg.substr(eq + 1), "cli", "--reference"));
    }

    std::vector<lpw::scenarios::CloudScenario> all = lpw::scenarios::presets();
    if (!f.config_path.empty())
        for (const auto& s : lpw::config::read_config_file(f.config_path).scenarios)
            all.push_back(s);

    Table t;
    t.id = "scenarios";
    t.title = "Deployment scenario evaluation";
    t.source_module = "scenarios";
    t.columns = {"scenario", "energy_j", "latency_s", "q_ped", "lpw"};
    for (const auto& [name, _] : references) t.columns.push_back("vs_" + name);
    for (const auto& s : all) {
        if (!names.empty() && std::find(names.begin(), names.end(), s.name) == names.end())
            continue;
        const auto eval = lpw::scenarios::evaluate_cloud(s, references);
        std::vector<Cell> row{Cell::str(s.name), Cell::of(s.server_energy_j, Cell::Kind::Joules),
                              Cell::of(s.latency_s, Cell::Kind::Seconds),
                              Cell::of(s.q_ped_assumed, Cell::Kind::Score),
                              Cell::of(eval.lpw, Cell::Kind::Lpw)};
        for (const auto& cmp : eval.comparisons) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.3gx %s", cmp.ratio,
                          cmp.higher ? "higher" : "(lower)");
            row.push_back(Cell::str(buf));
        }
        t.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(t));

    if (!fixed_q_args.empty()) {
        Table fq;
        fq.id = "fixed_q";
        fq.title = "Fixed-reference-quality LpW";
        fq.source_module = "metrics";
        fq.columns = {"q_ref", "net_j", "latency_s", "lpw"};
        for (const auto& arg : fixed_q_args) {
            double q, e, l;
            if (std::sscanf(arg.c_str(), "%lf,%lf,%lf", &q, &e, &l) != 3)
                throw lpw::UsageError("cli", "--fixed-q expects Q,ENERGY_J,LATENCY_S");
            fq.rows.push_back({Cell::of(q, Cell::Kind::Score), Cell::of(e, Cell::Kind::Joules),
                               Cell::of(l, Cell::Kind::Seconds),
                               Cell::of(lpw::metrics::fixed_q_lpw(e, l, q), Cell::Kind::Lpw)});
        }
        tables.push_back(std::move(fq));
    }

    if (!power_invariant.empty()) {
        if (power_invariant.size() != 2)
            throw lpw::UsageError("cli", "--power-invariant expects L_FULL,L_QUANT");
        std::optional<double> power;
        if (assumed_power > 0) power = assumed_power;
        const auto c = lpw::scenarios::power_invariant_ratio(power_invariant[0],
                                                             power_invariant[1], quality_ratio,
                                                             power);
        Table pi;
        pi.id = "power_invariant";
        pi.title = "Power-invariant quantisation comparison";
        pi.source_module = "scenarios";
        pi.columns = {"l_full_s", "l_quant_s", "quality_ratio", "lpw_ratio_quant/full",
                      "assumed_power_w", "full_energy_j", "quant_energy_j"};
        auto opt = [](const std::optional<double>& v, Cell::Kind k) {
            return v ? Cell::of(*v, k) : Cell::str("-");
        };
        pi.rows.push_back({Cell::of(c.l_full_s, Cell::Kind::Seconds),
                           Cell::of(c.l_quant_s, Cell::Kind::Seconds),
                           Cell::of(c.quality_ratio, Cell::Kind::Ratio),
                           Cell::of(c.lpw_ratio, Cell::Kind::Ratio),
                           opt(c.assumed_power_w, Cell::Kind::Watts),
                           opt(c.full_energy_j, Cell::Kind::Joules),
                           opt(c.quant_energy_j, Cell::Kind::Joules)});
        pi.notes.push_back("lpw_ratio is independent of the assumed power");
        tables.push_back(std::move(pi));
    }

    emit(wrap_tables(std::move(tables), f.fixed_time), lpw::report::parse_format(f.format),
         f.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audit toolkit for inference energy, latency, and rated response quality"};
    app.require_subcommand(1);

    // audit
    auto* audit = app.add_subcommand("audit", "Run the full audit pipeline");
    CommonFlags audit_flags;
    add_common(audit, audit_flags);
    std::vector<std::string> scheme_names, sections, scenario_names;
    std::vector<double> thresholds{10, 15, 30};
    double battery_wh = 50.0, clamp_floor = lpw::energy::kDefaultClampFloorJ;
    std::string trial_metrics_out, histogram_out;
    int histogram_bins = 30;
    audit->add_option("--scheme", scheme_names, "Aggregation scheme(s); first is primary");
    audit->add_option("--thresholds", thresholds, "Latency thresholds in seconds")
        ->delimiter(',');
    audit->add_option("--battery-wh", battery_wh, "Battery capacity for the budget table");
    audit->add_option("--clamp-floor", clamp_floor, "Net-energy clamp floor in Joules");
    audit->add_option("--sections", sections, "Sections to produce")->delimiter(',');
    audit->add_option("--scenario", scenario_names, "Scenario names to evaluate");
    audit->add_option("--trial-metrics-out", trial_metrics_out,
                      "Write per-trial metric CSV to this path");
    audit->add_option("--histogram-out", histogram_out, "Write LpW histogram CSV to this path");
    audit->add_option("--histogram-bins", histogram_bins, "Histogram bin count");

    // validate
    auto* validate = app.add_subcommand("validate", "Schema-check input files");
    CommonFlags validate_flags;
    add_common(validate, validate_flags);

    // energy
    auto* energy_cmd = app.add_subcommand("energy", "Idle calibration and energy accounting");
    CommonFlags energy_flags;
    add_common(energy_cmd, energy_flags);
    double e_idle_kwh = 0, t_idle_s = 0, energy_clamp = lpw::energy::kDefaultClampFloorJ;
    std::string tracker_log;
    bool calibrate = false;
    energy_cmd->add_flag("--calibrate", calibrate, "Compute idle power from an idle window");
    energy_cmd->add_option("--e-idle-kwh", e_idle_kwh, "Idle window energy (kWh)");
    energy_cmd->add_option("--t-idle-s", t_idle_s, "Idle window length (s)");
    energy_cmd->add_option("--tracker-log", tracker_log,
                           "Convert a cumulative tracker log to snapshot pairs");
    energy_cmd->add_option("--clamp-floor", energy_clamp, "Net-energy clamp floor in Joules");

    // scores
    auto* scores_cmd = app.add_subcommand("scores", "Aggregate rater scores per scheme");
    CommonFlags scores_flags;
    add_common(scores_cmd, scores_flags);
    std::vector<std::string> scores_schemes;
    scores_cmd->add_option("--scheme", scores_schemes, "Scheme names (default: all presets)");

    // reliability
    auto* rel_cmd = app.add_subcommand("reliability", "Inter-rater reliability statistics");
    CommonFlags rel_flags;
    add_common(rel_cmd, rel_flags);

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "Paired statistics between two configs");
    CommonFlags compare_flags;
    add_common(compare_cmd, compare_flags);
    std::string compare_metric = "q_ped", compare_by = "all", compare_scheme = "weighted";
    double compare_clamp = lpw::energy::kDefaultClampFloorJ;
    compare_cmd->add_option("--metric", compare_metric, "q_ped, latency, energy, or lpw");
    compare_cmd->add_option("--by", compare_by, "overall, dimension, category, or all");
    compare_cmd->add_option("--scheme", compare_scheme, "Aggregation scheme for q_ped");
    compare_cmd->add_option("--clamp-floor", compare_clamp, "Net-energy clamp floor in Joules");

    // barrier
    auto* barrier_cmd = app.add_subcommand("barrier", "Latency thresholds and battery budget");
    CommonFlags barrier_flags;
    add_common(barrier_cmd, barrier_flags);
    std::vector<double> barrier_thresholds{10, 15, 30};
    double barrier_battery = 50.0, barrier_clamp = lpw::energy::kDefaultClampFloorJ;
    barrier_cmd->add_option("--thresholds", barrier_thresholds, "Latency thresholds in seconds")
        ->delimiter(',');
    barrier_cmd->add_option("--battery-wh", barrier_battery, "Battery capacity (Wh)");
    barrier_cmd->add_option("--clamp-floor", barrier_clamp, "Net-energy clamp floor in Joules");

    // scenarios
    auto* scen_cmd = app.add_subcommand("scenarios", "Closed-form deployment scenarios");
    CommonFlags scen_flags;
    add_common(scen_cmd, scen_flags);
    std::vector<std::string> scen_names, scen_references, scen_fixed_q;
    std::vector<double> scen_power_invariant;
    double scen_assumed_power = 0, scen_quality_ratio = 1.0;
    scen_cmd->add_option("--scenario", scen_names, "Scenario names (default: all)");
    scen_cmd->add_option("--reference", scen_references,
                         "Reference LpW as NAME=VALUE (repeatable)");
    scen_cmd->add_option("--fixed-q", scen_fixed_q, "Fixed-reference LpW as Q,ENERGY_J,LATENCY_S");
    scen_cmd->add_option("--power-invariant", scen_power_invariant,
                         "Latency pair L_FULL,L_QUANT for the power-invariant ratio")
        ->delimiter(',');
    scen_cmd->add_option("--assumed-power", scen_assumed_power,
                         "Illustrative package power (W) for absolute energies");
    scen_cmd->add_option("--quality-ratio", scen_quality_ratio,
                         "Quant/full quality ratio (default 1)");

    try {
        app.parse(argc, argv);

        if (*validate) return run_validate(validate_flags);
        if (*energy_cmd)
            return run_energy(energy_flags, e_idle_kwh, t_idle_s, calibrate, tracker_log,
                              energy_clamp);
        if (*scores_cmd) return run_scores(scores_flags, scores_schemes);
        if (*rel_cmd) return run_reliability(rel_flags);
        if (*compare_cmd)
            return run_compare(compare_flags, compare_metric, compare_by, compare_scheme,
                               compare_clamp);
        if (*barrier_cmd)
            return run_barrier(barrier_flags, barrier_thresholds, barrier_battery, barrier_clamp);
        if (*scen_cmd)
            return run_scenarios(scen_flags, scen_names, scen_references, scen_fixed_q,
                                 scen_power_invariant, scen_assumed_power, scen_quality_ratio);

        // audit
        lpw::pipeline::RunConfig run;
        run.trials = parse_inputs(audit_flags.trials);
        run.scores = parse_inputs(audit_flags.scores);
        run.config_path = audit_flags.config_path;
        run.scheme_names = scheme_names;
        run.thresholds_s = thresholds;
        run.battery_wh = battery_wh;
        run.clamp_floor_j = clamp_floor;
        run.sections = sections;
        run.scenario_names = scenario_names;
        run.fixed_time = audit_flags.fixed_time;
        auto outcome = lpw::pipeline::cmd_audit(run);
        emit(outcome.report, lpw::report::parse_format(audit_flags.format), audit_flags.out_path);

        if (!trial_metrics_out.empty() || !histogram_out.empty()) {
            // Per-trial metric export wants the primary-scheme analysis again.
            lpw::config::RunConfigFile cfg;
            if (!run.config_path.empty()) cfg = lpw::config::read_config_file(run.config_path);
            const auto scheme =
                run.scheme_names.empty()
                    ? lpw::scoring::preset("weighted")
                    : resolve_scheme(run.scheme_names.front(), run.config_path);
            std::ofstream tm, hist;
            if (!trial_metrics_out.empty()) {
                tm.open(trial_metrics_out, std::ios::binary);
                if (!tm) throw lpw::IoError("cli", "cannot open " + trial_metrics_out);
                tm << "config_id,prompt_id,lpw,qpj,qps,lpw_geo\n";
            }
            if (!histogram_out.empty()) {
                hist.open(histogram_out, std::ios::binary);
                if (!hist) throw lpw::IoError("cli", "cannot open " + histogram_out);
                hist << "config_id,bin_lo,bin_hi,count\n";
            }
            for (const auto& ti : run.trials) {
                const lpw::pipeline::InputFile* si = nullptr;
                for (const auto& s : run.scores)
                    if (s.config_id == ti.config_id) si = &s;
                if (!si) continue;
                double idle_w = 0;
                for (const auto& d : cfg.configs)
                    if (d.config_id == ti.config_id) idle_w = d.idle_power_w;
                auto acct = lpw::energy::account_dataset(
                    lpw::ingest_trials(ti.path, ti.config_id),
                    lpw::energy::calibration_from_power(idle_w), run.clamp_floor_j);
                auto analysis = lpw::metrics::build_analysis(
                    acct.trials,
                    lpw::scoring::quality_profiles(lpw::ingest_scores(si->path, si->config_id),
                                                   scheme));
                if (tm.is_open()) {
                    for (const auto& a : analysis) {
                        char line[256];
                        std::snprintf(line, sizeof(line), "%s,%d,%.17g,%.17g,%.17g,%.17g\n",
                                      a.config_id.c_str(), a.prompt_id, a.m.lpw, a.m.qpj, a.m.qps,
                                      a.m.lpw_geo);
                        tm << line;
                    }
                }
                if (hist.is_open()) {
                    const auto vals = lpw::metrics::select(analysis, lpw::metrics::MetricField::Lpw);
                    const auto h = lpw::metrics::histogram(vals, histogram_bins);
                    for (std::size_t i = 0; i < h.counts.size(); ++i) {
                        const double lo = h.lo + h.width * static_cast<double>(i);
                        const double hi = i + 1 == h.counts.size() ? h.hi : lo + h.width;
                        char line[160];
                        std::snprintf(line, sizeof(line), "%s,%.10g,%.10g,%ld\n",
                                      ti.config_id.c_str(), lo, hi, h.counts[i]);
                        hist << line;
                    }
                }
            }
        }
        return outcome.exit_code;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const lpw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
