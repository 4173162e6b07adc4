#include "lpw/pipeline.hpp"

#include <algorithm>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

#include "lpw/errors.hpp"
#include "lpw/inferstat.hpp"
#include "lpw/metrics.hpp"
#include "lpw/reliability.hpp"
#include "lpw/scenarios.hpp"
#include "lpw/scoring.hpp"

namespace lpw::pipeline {

namespace {

constexpr const char* kModule = "cli";

using report::Cell;
using report::Table;

struct LoadedConfig {
    ConfigDescriptor desc;
    std::vector<TrialRecord> trials;                      // accounted, sorted by prompt_id
    std::optional<ScoreMatrix> scores;
    std::vector<scoring::QualityProfile> profiles;        // primary scheme
    std::vector<metrics::TrialAnalysis> analysis;         // trials x profiles
    long clamped = 0;
    bool has_trials = false;
};

struct Loaded {
    std::vector<LoadedConfig> configs;  // stable input order
    std::vector<scoring::AggregationScheme> custom_schemes;
    std::vector<scenarios::CloudScenario> custom_scenarios;
    scoring::AggregationScheme primary_scheme;
    std::vector<std::string> warnings;

    LoadedConfig* find(const std::string& id) {
        for (auto& c : configs)
            if (c.desc.config_id == id) return &c;
        return nullptr;
    }
};

scoring::AggregationScheme resolve_scheme(const std::string& name,
                                          const std::vector<scoring::AggregationScheme>& custom) {
    for (const auto& s : custom)
        if (s.id == name) return s;
    return scoring::preset(name);
}

Loaded load_inputs(const RunConfig& run) {
    Loaded out;

    config::RunConfigFile cfg;
    if (!run.config_path.empty()) cfg = config::read_config_file(run.config_path);
    out.custom_schemes = cfg.schemes;
    out.custom_scenarios = cfg.scenarios;

    const std::string primary_name =
        run.scheme_names.empty() ? std::string("weighted") : run.scheme_names.front();
    out.primary_scheme = resolve_scheme(primary_name, out.custom_schemes);
    for (const auto& name : run.scheme_names) resolve_scheme(name, out.custom_schemes);  // validate

    auto ensure_config = [&](const std::string& id) -> LoadedConfig& {
        if (auto* c = out.find(id)) return *c;
        LoadedConfig lc;
        lc.desc.config_id = id;
        bool described = false;
        for (const auto& d : cfg.configs) {
            if (d.config_id == id) {
                lc.desc = d;
                described = true;
                break;
            }
        }
        if (!described)
            out.warnings.push_back("config '" + id +
                                   "' has no descriptor; assuming 0 W idle power");
        out.configs.push_back(std::move(lc));
        return out.configs.back();
    };

    for (const auto& in : run.trials) {
        auto& lc = ensure_config(in.config_id);
        if (lc.has_trials)
            throw SchemaError("dataset", "two --trials inputs for config '" + in.config_id +
                                             "'; (config_id, prompt_id) must stay unique");
        auto raw = ingest_trials(in.path, in.config_id);
        if (raw.empty())
            out.warnings.push_back("config '" + in.config_id + "': " + in.path +
                                   " has a header but no trial rows");
        auto cal = energy::calibration_from_power(lc.desc.idle_power_w);
        auto acct = energy::account_dataset(std::move(raw), cal, run.clamp_floor_j);
        lc.trials = std::move(acct.trials);
        lc.clamped = acct.clamped;
        lc.has_trials = true;
    }
    for (const auto& in : run.scores) {
        auto& lc = ensure_config(in.config_id);
        if (lc.scores)
            throw SchemaError("dataset", "two --scores inputs for config '" + in.config_id + "'");
        lc.scores = ingest_scores(in.path, in.config_id);
        if (lc.scores->entries.empty())
            out.warnings.push_back("config '" + in.config_id + "': " + in.path +
                                   " has a header but no score rows");
    }
    for (auto& lc : out.configs) {
        if (!lc.scores) continue;
        try {
            lc.profiles = scoring::quality_profiles(*lc.scores, out.primary_scheme);
        } catch (const InsufficientDataError& e) {
            throw InsufficientDataError(
                "scoring", "config '" + lc.desc.config_id + "', scheme '" +
                               out.primary_scheme.id + "': " + e.what());
        }
        if (lc.has_trials) lc.analysis = metrics::build_analysis(lc.trials, lc.profiles);
    }
    return out;
}

// --- section builders ----------------------------------------------------------


Table build_aggregate(Loaded& data) {
    Table t;
    t.id = "aggregate";
    t.title = "Aggregate comparison";
    t.source_module = "metrics";
    t.columns = {"config", "precision", "n", "mean_latency_s", "mean_net_j", "mean_q_ped",
                 "mean_lpw"};
    std::vector<std::pair<std::string, std::array<double, 4>>> means;
    for (auto& c : data.configs) {
        if (c.analysis.empty()) continue;
        const auto lat = metrics::summarize(metrics::select(c.analysis, metrics::MetricField::Latency),
                                            c.desc.config_id, "latency_s");
        const auto net = metrics::summarize(metrics::select(c.analysis, metrics::MetricField::NetEnergy),
                                            c.desc.config_id, "net_j");
        const auto q = metrics::summarize(metrics::select(c.analysis, metrics::MetricField::QPed),
                                          c.desc.config_id, "q_ped");
        const auto lpw = metrics::summarize(metrics::select(c.analysis, metrics::MetricField::Lpw),
                                            c.desc.config_id, "lpw");
        t.rows.push_back({Cell::str(c.desc.config_id), Cell::str(std::string(to_string(c.desc.precision))),
                          Cell::integer(lat.n), Cell::of(lat.mean, Cell::Kind::Seconds),
                          Cell::of(net.mean, Cell::Kind::Joules), Cell::of(q.mean, Cell::Kind::Score),
                          Cell::of(lpw.mean, Cell::Kind::Lpw)});
        means.emplace_back(c.desc.config_id,
                           std::array<double, 4>{lat.mean, net.mean, q.mean, lpw.mean});
    }
    if (means.size() == 2) {
        const auto& [na, a] = means[0];
        const auto& [nb, b] = means[1];
        t.rows.push_back({Cell::str("ratio " + na + "/" + nb), Cell::str(""), Cell::str(""),
                          Cell::of(a[0] / b[0], Cell::Kind::Ratio),
                          Cell::of(a[1] / b[1], Cell::Kind::Ratio),
                          Cell::of(a[2] / b[2], Cell::Kind::Ratio),
                          Cell::of(a[3] / b[3], Cell::Kind::Ratio)});
    }
    return t;
}

Table build_per_category(Loaded& data) {
    Table t;
    t.id = "per_category";
    t.title = "Per-category summary";
    t.source_module = "metrics";
    t.columns = {"config", "category", "n", "mean_latency_s", "mean_net_j", "mean_q_ped",
                 "mean_lpw"};
    for (auto& c : data.configs) {
        if (c.analysis.empty()) continue;
        for (Category cat : kCategories) {
            std::vector<metrics::TrialAnalysis> slice;
            for (const auto& a : c.analysis)
                if (a.category == cat) slice.push_back(a);
            if (slice.empty()) continue;
            auto mean_of = [&](metrics::MetricField f) {
                const auto vals = metrics::select(slice, f);
                double s = 0;
                for (double v : vals) s += v;
                return s / static_cast<double>(vals.size());
            };
            t.rows.push_back(
                {Cell::str(c.desc.config_id), Cell::str(std::string(to_string(cat))),
                 Cell::integer(static_cast<long>(slice.size())),
                 Cell::of(mean_of(metrics::MetricField::Latency), Cell::Kind::Seconds),
                 Cell::of(mean_of(metrics::MetricField::NetEnergy), Cell::Kind::Joules),
                 Cell::of(mean_of(metrics::MetricField::QPed), Cell::Kind::Score),
                 Cell::of(mean_of(metrics::MetricField::Lpw), Cell::Kind::Lpw)});
        }
    }
    return t;
}

Table build_sweep(Loaded& data, const std::vector<scoring::AggregationScheme>& schemes,
                  const std::string& id, const std::string& title,
                  std::vector<std::string>& warnings) {
    Table t;
    t.id = id;
    t.title = title;
    t.source_module = "scoring";
    t.columns = {"scheme"};
    std::vector<LoadedConfig*> scored;
    for (auto& c : data.configs)
        if (c.scores) scored.push_back(&c);
    for (auto* c : scored) {
        t.columns.push_back(c->desc.config_id + "_q_ped");
        if (c->has_trials) t.columns.push_back(c->desc.config_id + "_lpw");
    }
    if (scored.size() == 2 && scored[0]->has_trials && scored[1]->has_trials)
        t.columns.push_back("lpw_ratio_" + scored[0]->desc.config_id + "/" +
                            scored[1]->desc.config_id);

    for (const auto& scheme : schemes) {
        std::vector<Cell> row{Cell::str(scheme.id)};
        std::vector<double> lpw_means;
        try {
            for (auto* c : scored) {
                const auto profiles = scoring::quality_profiles(*c->scores, scheme);
                double q_sum = 0;
                for (const auto& p : profiles) q_sum += p.q_ped;
                row.push_back(Cell::of(q_sum / static_cast<double>(profiles.size()),
                                       Cell::Kind::Score));
                if (c->has_trials) {
                    const auto analysis = metrics::build_analysis(c->trials, profiles);
                    const auto vals = metrics::select(analysis, metrics::MetricField::Lpw);
                    double s = 0;
                    for (double v : vals) s += v;
                    const double mean = s / static_cast<double>(vals.size());
                    row.push_back(Cell::of(mean, Cell::Kind::Lpw));
                    lpw_means.push_back(mean);
                }
            }
        } catch (const InsufficientDataError& e) {
            warnings.push_back(id + ": scheme '" + scheme.id + "' skipped: " + e.what());
            continue;
        }
        if (scored.size() == 2 && lpw_means.size() == 2)
            row.push_back(Cell::of(lpw_means[0] / lpw_means[1], Cell::Kind::Ratio));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void build_reliability(Loaded& data, std::vector<Table>& out) {
    Table rel;
    rel.id = "reliability";
    rel.title = "Inter-rater reliability (Krippendorff alpha, ordinal; ICC(2,1))";
    rel.source_module = "reliability";
    rel.columns = {"group", "dimension"};
    std::vector<LoadedConfig*> scored;
    for (auto& c : data.configs)
        if (c.scores) scored.push_back(&c);
    for (auto* c : scored) {
        rel.columns.push_back(c->desc.config_id + "_alpha");
        rel.columns.push_back(c->desc.config_id + "_icc21");
    }
    auto opt_cell = [](const std::optional<double>& v) {
        return v ? Cell::of(*v, Cell::Kind::Score) : Cell::na();
    };
    for (auto group : {reliability::PanelGroup::Human, reliability::PanelGroup::Ai,
                       reliability::PanelGroup::Combined}) {
        std::vector<reliability::ReliabilityReport> reports;
        for (auto* c : scored) reports.push_back(reliability::reliability_report(*c->scores, group));
        for (Dimension d : kDimensions) {
            std::vector<Cell> row{Cell::str(std::string(to_string(group))),
                                  Cell::str(std::string(to_string(d)))};
            for (const auto& r : reports) {
                row.push_back(opt_cell(r.per_dimension[dim_index(d)].alpha));
                row.push_back(opt_cell(r.per_dimension[dim_index(d)].icc));
            }
            rel.rows.push_back(std::move(row));
        }
        std::vector<Cell> overall{Cell::str(std::string(to_string(group))), Cell::str("overall")};
        for (const auto& r : reports) {
            overall.push_back(opt_cell(r.overall.alpha));
            overall.push_back(opt_cell(r.overall.icc));
        }
        rel.rows.push_back(std::move(overall));
    }
    rel.notes.push_back("computed per configuration; undefined marks zero-variance data");
    out.push_back(std::move(rel));

    Table corr;
    corr.id = "human_ai_correlation";
    corr.title = "Human-AI Pearson correlation of per-prompt means";
    corr.source_module = "reliability";
    corr.columns = {"dimension"};
    for (auto* c : scored) corr.columns.push_back(c->desc.config_id + "_r");
    auto corr_row = [&](const std::string& label, std::optional<Dimension> d) {
        std::vector<Cell> row{Cell::str(label)};
        for (auto* c : scored) {
            try {
                row.push_back(opt_cell(reliability::human_ai_correlation(*c->scores, d)));
            } catch (const InsufficientDataError&) {
                row.push_back(Cell::na());
            }
        }
        corr.rows.push_back(std::move(row));
    };
    for (Dimension d : kDimensions) corr_row(std::string(to_string(d)), d);
    corr_row("overall", std::nullopt);
    out.push_back(std::move(corr));

    Table sev;
    sev.id = "severity";
    sev.title = "Severity variance decomposition (between vs within raters)";
    sev.source_module = "reliability";
    sev.columns = {"config", "group", "dimension", "between_var", "within_var", "ratio"};
    for (auto* c : scored) {
        for (RaterType group : {RaterType::Human, RaterType::Ai}) {
            for (Dimension d : kDimensions) {
                try {
                    const auto dec = reliability::severity_decomposition(*c->scores, group, d);
                    sev.rows.push_back(
                        {Cell::str(c->desc.config_id), Cell::str(std::string(to_string(group))),
                         Cell::str(std::string(to_string(d))),
                         Cell::of(dec.between_var, Cell::Kind::Generic),
                         Cell::of(dec.mean_within_var, Cell::Kind::Generic),
                         dec.ratio ? Cell::of(*dec.ratio, Cell::Kind::Ratio) : Cell::na()});
                } catch (const InsufficientDataError&) {
                    // group absent for this config; skip the row
                }
            }
        }
    }
    out.push_back(std::move(sev));
}

Table build_inferential(Loaded& data, std::vector<std::string>& warnings) {
    Table t;
    t.id = "inferential";
    t.title = "Paired comparisons";
    t.source_module = "inferstat";
    t.columns = {"label", "n", "delta", "t", "df", "p", "d", "W", "p_w"};

    std::vector<LoadedConfig*> ready;
    for (auto& c : data.configs)
        if (!c.analysis.empty()) ready.push_back(&c);
    if (ready.size() < 2) {
        warnings.push_back("inferential: needs two configurations with trials and scores");
        return t;
    }
    auto* a = ready[0];
    auto* b = ready[1];
    if (ready.size() > 2)
        warnings.push_back("inferential: comparing first two configurations ('" +
                           a->desc.config_id + "' vs '" + b->desc.config_id + "')");
    t.title += " (" + a->desc.config_id + " - " + b->desc.config_id + ")";

    std::map<int, const metrics::TrialAnalysis*> bm;
    for (const auto& x : b->analysis) bm[x.prompt_id] = &x;
    std::vector<std::pair<metrics::TrialAnalysis, metrics::TrialAnalysis>> pairs;
    int unpaired = 0;
    for (const auto& x : a->analysis) {
        auto it = bm.find(x.prompt_id);
        if (it != bm.end())
            pairs.emplace_back(x, *it->second);
        else
            ++unpaired;
    }
    if (pairs.empty())
        throw InsufficientDataError("inferstat", "no paired prompts between '" +
                                                     a->desc.config_id + "' and '" +
                                                     b->desc.config_id + "'");
    if (unpaired) warnings.push_back("inferential: " + std::to_string(unpaired) + " unpaired prompts");

    auto add_rows = [&](inferstat::ValueSelector sel, inferstat::Grouping grouping) {
        auto result = inferstat::compare_slices(pairs, sel, grouping);
        for (auto& w : result.warnings) warnings.push_back("inferential: " + w);
        for (const auto& c : result.rows) {
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
    add_rows(inferstat::ValueSelector::QPed, inferstat::Grouping::Overall);
    add_rows(inferstat::ValueSelector::QPed, inferstat::Grouping::PerDimension);
    add_rows(inferstat::ValueSelector::QPed, inferstat::Grouping::PerCategory);
    t.notes.push_back(
        "two-sided tests; wilcoxon drops zero differences and midranks ties "
        "(exact distribution up to n=25, tie-corrected normal above)");
    return t;
}

void build_barrier(Loaded& data, const RunConfig& run, std::vector<Table>& out) {
    Table t;
    t.id = "barrier";
    t.title = "Latency threshold exceedance";
    t.source_module = "metrics";
    t.columns = {"config", "threshold_s", "n_exceed", "fraction"};
    t.notes.push_back("exceeds means strictly greater than the threshold");
    Table battery;
    battery.id = "battery";
    battery.title = "Battery budget";
    battery.source_module = "metrics";
    battery.columns = {"config", "battery_wh", "mean_net_j", "interactions_per_charge"};
    for (auto& c : data.configs) {
        if (!c.has_trials || c.trials.empty()) continue;
        const auto rep = metrics::barrier_analysis(c.trials, run.thresholds_s, run.battery_wh);
        for (std::size_t i = 0; i < rep.thresholds_s.size(); ++i) {
            t.rows.push_back({Cell::str(c.desc.config_id),
                              Cell::of(rep.thresholds_s[i], Cell::Kind::Seconds),
                              Cell::integer(rep.exceed_counts[i]),
                              Cell::of(rep.exceed_fractions[i], Cell::Kind::Ratio)});
        }
        battery.rows.push_back({Cell::str(c.desc.config_id),
                                Cell::of(rep.battery_wh, Cell::Kind::Generic),
                                Cell::of(rep.mean_net_j, Cell::Kind::Joules),
                                Cell::integer(rep.interactions_per_charge)});
    }
    out.push_back(std::move(t));
    out.push_back(std::move(battery));
}

Table build_regime(Loaded& data, std::vector<std::string>& warnings) {
    Table t;
    t.id = "regime";
    t.title = "Cache regime comparison";
    t.source_module = "metrics";

    // Look for two precisions, each measured under cache_on and cache_off.
    std::map<Precision, std::map<CacheRegime, LoadedConfig*>> grid;
    for (auto& c : data.configs)
        if (!c.analysis.empty()) grid[c.desc.precision][c.desc.cache_regime] = &c;
    std::vector<std::pair<Precision, std::pair<LoadedConfig*, LoadedConfig*>>> complete;
    for (auto& [prec, cells] : grid) {
        auto on = cells.find(CacheRegime::CacheOn);
        auto off = cells.find(CacheRegime::CacheOff);
        if (on != cells.end() && off != cells.end())
            complete.emplace_back(prec, std::make_pair(on->second, off->second));
    }
    if (complete.size() != 2) {
        warnings.push_back(
            "regime: needs two precisions each with cache_on and cache_off configurations");
        t.columns = {"metric"};
        return t;
    }
    auto& [prec_a, pair_a] = complete[0];
    auto& [prec_b, pair_b] = complete[1];
    const std::string a = std::string(to_string(prec_a));
    const std::string b = std::string(to_string(prec_b));
    t.columns = {"metric", "on_" + a + "/" + b, "off_" + a + "/" + b, "on/off_" + a,
                 "on/off_" + b};

    for (auto field : {metrics::MetricField::Latency, metrics::MetricField::NetEnergy,
                       metrics::MetricField::Lpw}) {
        const std::string name(to_string(field));
        auto s = [&](LoadedConfig* c) {
            return metrics::summarize(metrics::select(c->analysis, field), c->desc.config_id, name);
        };
        const auto r = metrics::regime_comparison(s(pair_a.first), s(pair_a.second),
                                                  s(pair_b.first), s(pair_b.second));
        t.rows.push_back({Cell::str(name), Cell::of(r.on_ratio_ab, Cell::Kind::Ratio),
                          Cell::of(r.off_ratio_ab, Cell::Kind::Ratio),
                          Cell::of(r.improvement_a, Cell::Kind::Ratio),
                          Cell::of(r.improvement_b, Cell::Kind::Ratio)});
    }
    return t;
}

Table build_scenarios(Loaded& data, const RunConfig& run) {
    Table t;
    t.id = "scenarios";
    t.title = "Deployment scenario evaluation";
    t.source_module = "scenarios";
    t.columns = {"scenario", "energy_j", "latency_s", "q_ped", "lpw"};

    std::vector<std::pair<std::string, double>> references;
    for (auto& c : data.configs) {
        if (c.analysis.empty()) continue;
        const auto vals = metrics::select(c.analysis, metrics::MetricField::Lpw);
        double s = 0;
        for (double v : vals) s += v;
        references.emplace_back(c.desc.config_id, s / static_cast<double>(vals.size()));
    }
    for (const auto& [name, _] : references) t.columns.push_back("vs_" + name);

    std::vector<scenarios::CloudScenario> all = scenarios::presets();
    for (const auto& s : data.custom_scenarios) all.push_back(s);
    for (const auto& s : all) {
        if (!run.scenario_names.empty() &&
            std::find(run.scenario_names.begin(), run.scenario_names.end(), s.name) ==
                run.scenario_names.end())
            continue;
        const auto eval = scenarios::evaluate_cloud(s, references);
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
    return t;
}

}  // namespace

std::string current_utc_iso8601() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

AuditOutcome cmd_audit(const RunConfig& run) {
    // Validate section names up front.
    for (const auto& s : run.sections)
        if (std::find(section_names().begin(), section_names().end(), s) == section_names().end())
            throw UsageError(kModule, "unknown section '" + s + "'");

    Loaded data = load_inputs(run);

    const bool have_trials = !run.trials.empty();
    const bool have_scores = !run.scores.empty();
    std::vector<std::string> selected = run.sections;
    const bool explicit_sections = !selected.empty();
    if (!explicit_sections) {
        if (have_trials && have_scores)
            selected.insert(selected.end(),
                            {"aggregate", "per_category", "weighting_sweep", "rater_sweep"});
        else if (have_scores)
            selected.insert(selected.end(), {"weighting_sweep", "rater_sweep"});
        if (have_scores) selected.push_back("reliability");
        if (have_trials && have_scores) selected.push_back("inferential");
        if (have_trials) selected.push_back("barrier");
        if (have_trials && have_scores) selected.push_back("regime");
        selected.push_back("scenarios");
    }
    if (selected.empty())
        throw UsageError(kModule, "no analysis section selected and no inputs to select from");

    // Explicitly requested sections fail loudly when their stage has no input.
    if (explicit_sections) {
        for (const auto& s : selected) {
            const bool needs_scores = s == "aggregate" || s == "per_category" ||
                                      s == "weighting_sweep" || s == "rater_sweep" ||
                                      s == "reliability" || s == "inferential" || s == "regime";
            const bool needs_trials = s == "aggregate" || s == "per_category" ||
                                      s == "inferential" || s == "barrier" || s == "regime";
            if (needs_scores && !have_scores)
                throw InsufficientDataError("scoring", "section '" + s +
                                                           "' requires score matrices (--scores)");
            if (needs_trials && !have_trials)
                throw InsufficientDataError("dataset", "section '" + s +
                                                           "' requires trial telemetry (--trials)");
        }
    }

    AuditOutcome out;
    out.report.generated_at = run.fixed_time.empty() ? current_utc_iso8601() : run.fixed_time;
    {
        std::vector<std::string> paths;
        for (const auto& f : run.trials) paths.push_back(f.path);
        for (const auto& f : run.scores) paths.push_back(f.path);
        if (!run.config_path.empty()) paths.push_back(run.config_path);
        std::sort(paths.begin(), paths.end());
        out.report.fingerprint = paths.empty() ? "none" : report::fingerprint_files(paths);
    }
    out.report.warnings = data.warnings;

    auto sweep_schemes = [&](bool weighting) {
        std::vector<scoring::AggregationScheme> schemes =
            weighting ? scoring::weighting_presets() : scoring::rater_mode_presets();
        for (const auto& s : data.custom_schemes) schemes.push_back(s);
        return schemes;
    };

    for (const auto& name : selected) {
        try {
            if (name == "aggregate") out.report.sections.push_back(build_aggregate(data));
            else if (name == "per_category") out.report.sections.push_back(build_per_category(data));
            else if (name == "weighting_sweep")
                out.report.sections.push_back(
                    build_sweep(data, sweep_schemes(true), "weighting_sweep",
                                "Dimension weighting sensitivity", out.report.warnings));
            else if (name == "rater_sweep")
                out.report.sections.push_back(
                    build_sweep(data, sweep_schemes(false), "rater_sweep",
                                "Rater aggregation sensitivity", out.report.warnings));
            else if (name == "reliability") build_reliability(data, out.report.sections);
            else if (name == "inferential")
                out.report.sections.push_back(build_inferential(data, out.report.warnings));
            else if (name == "barrier") build_barrier(data, run, out.report.sections);
            else if (name == "regime")
                out.report.sections.push_back(build_regime(data, out.report.warnings));
            else if (name == "scenarios") out.report.sections.push_back(build_scenarios(data, run));
        } catch (const InsufficientDataError& e) {
            out.report.warnings.push_back("section '" + name + "' skipped: " + e.what());
            Table empty;
            empty.id = name;
            empty.title = "(skipped)";
            empty.source_module = "cli";
            out.report.sections.push_back(std::move(empty));
        }
    }

    for (auto& c : data.configs)
        if (c.has_trials)
            out.report.clamp_counts.emplace_back(c.desc.config_id, c.clamped);

    bool any_rows = false;
    for (const auto& t : out.report.sections) any_rows |= !t.rows.empty();
    out.exit_code = any_rows ? 0 : 3;
    return out;
}

std::vector<FileDiagnosis> cmd_validate(const RunConfig& run) {
    std::vector<FileDiagnosis> out;
    auto check = [&](const std::string& role, const std::string& config_id,
                     const std::string& path, auto&& fn) {
        FileDiagnosis d;
        d.role = role;
        d.config_id = config_id;
        d.path = path;
        try {
            fn();
            d.ok = true;
            d.message = "ok";
        } catch (const Error& e) {
            d.ok = false;
            d.message = e.what();
        }
        out.push_back(std::move(d));
    };
    for (const auto& f : run.trials)
        check("trials", f.config_id, f.path, [&] { ingest_trials(f.path, f.config_id); });
    for (const auto& f : run.scores)
        check("scores", f.config_id, f.path, [&] { ingest_scores(f.path, f.config_id); });
    if (!run.config_path.empty())
        check("config", "", run.config_path, [&] { config::read_config_file(run.config_path); });
    return out;
}

}  // namespace lpw::pipeline
