#include "lpw/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lpw/csv.hpp"
#include "lpw/errors.hpp"

namespace lpw {

namespace {
constexpr const char* kModule = "dataset";

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string opt_cell(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}
}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Mathematics: return "Mathematics";
        case Category::Science: return "Science";
        case Category::ProgrammingCS: return "Programming-CS";
        case Category::Humanities: return "Humanities";
        case Category::MetaCognition: return "Meta-cognition";
    }
    return "?";
}

std::optional<Category> parse_category(std::string_view s) {
    const std::string v = csv::lower(csv::trim(s));
    for (Category c : kCategories)
        if (v == csv::lower(to_string(c))) return c;
    return std::nullopt;
}

std::string_view to_string(Precision p) {
    switch (p) {
        case Precision::FP16: return "FP16";
        case Precision::NF4: return "NF4";
        case Precision::Q4_K_M: return "Q4_K_M";
        case Precision::F16: return "F16";
        case Precision::Other: return "other";
    }
    return "?";
}

std::optional<Precision> parse_precision(std::string_view s) {
    const std::string v = csv::lower(csv::trim(s));
    if (v == "fp16") return Precision::FP16;
    if (v == "nf4") return Precision::NF4;
    if (v == "q4_k_m") return Precision::Q4_K_M;
    if (v == "f16") return Precision::F16;
    if (v == "other") return Precision::Other;
    return std::nullopt;
}

std::string_view to_string(CacheRegime r) {
    switch (r) {
        case CacheRegime::CacheOn: return "cache_on";
        case CacheRegime::CacheOff: return "cache_off";
        case CacheRegime::NotApplicable: return "not_applicable";
    }
    return "?";
}

std::optional<CacheRegime> parse_cache_regime(std::string_view s) {
    const std::string v = csv::lower(csv::trim(s));
    if (v == "cache_on" || v == "on") return CacheRegime::CacheOn;
    if (v == "cache_off" || v == "off") return CacheRegime::CacheOff;
    if (v == "not_applicable" || v == "n/a" || v == "na") return CacheRegime::NotApplicable;
    return std::nullopt;
}

std::string_view to_string(RaterType t) {
    return t == RaterType::Human ? "human" : "ai";
}

std::optional<RaterType> parse_rater_type(std::string_view s) {
    const std::string v = csv::lower(csv::trim(s));
    if (v == "human") return RaterType::Human;
    if (v == "ai") return RaterType::Ai;
    return std::nullopt;
}

std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::CA: return "CA";
        case Dimension::CC: return "CC";
        case Dimension::SQ: return "SQ";
        case Dimension::LA: return "LA";
    }
    return "?";
}

std::vector<int> ScoreMatrix::prompt_ids() const {
    std::set<int> ids;
    for (const auto& e : entries) ids.insert(e.prompt_id);
    return {ids.begin(), ids.end()};
}

std::vector<std::string> ScoreMatrix::rater_ids(std::optional<RaterType> t) const {
    std::set<std::string> ids;
    for (const auto& e : entries)
        if (!t || e.rater_type == *t) ids.insert(e.rater_id);
    return {ids.begin(), ids.end()};
}

const ConfigDescriptor* Dataset::find_config(std::string_view config_id) const {
    for (const auto& c : configs)
        if (c.config_id == config_id) return &c;
    return nullptr;
}

std::vector<TrialRecord> Dataset::trials_for(std::string_view config_id) const {
    std::vector<TrialRecord> out;
    for (const auto& t : trials)
        if (t.config_id == config_id) out.push_back(t);
    std::sort(out.begin(), out.end(),
              [](const TrialRecord& a, const TrialRecord& b) { return a.prompt_id < b.prompt_id; });
    return out;
}

const ScoreMatrix* Dataset::scores_for(std::string_view config_id) const {
    for (const auto& s : scores)
        if (s.config_id == config_id) return &s;
    return nullptr;
}

void Dataset::validate() const {
    std::set<std::string> ids;
    for (const auto& c : configs) {
        if (!ids.insert(c.config_id).second)
            throw SchemaError(kModule, "duplicate config_id '" + c.config_id + "'");
        if (c.idle_power_w < 0)
            throw SchemaError(kModule, "config '" + c.config_id + "': idle_power_w must be >= 0");
    }
    for (const auto& t : trials)
        if (!ids.count(t.config_id))
            throw SchemaError(kModule, "trial prompt_id " + std::to_string(t.prompt_id) +
                                           " references unknown config '" + t.config_id + "'");
    for (const auto& s : scores)
        if (!ids.count(s.config_id))
            throw SchemaError(kModule, "score matrix references unknown config '" + s.config_id + "'");
}

// --- trials ------------------------------------------------------------------

std::vector<TrialRecord> ingest_trials(std::istream& in, const std::string& origin,
                                       const std::string& config_id) {
    csv::Table t = csv::read_stream(in, origin, kModule);

    const std::size_t c_prompt = t.require_column("prompt_id", kModule);
    const std::size_t c_cat = t.require_column("category", kModule);
    const std::size_t c_lat = t.require_column("latency_s", kModule);
    const auto c_es = t.column("e_start_kwh");
    const auto c_ee = t.column("e_end_kwh");
    const auto c_gross = t.column("gross_j");
    const auto c_net = t.column("net_j");
    const auto c_co2 = t.column("co2_kg");
    if (!((c_es && c_ee) || c_gross || c_net))
        throw SchemaError(kModule, origin +
            ": need an energy column: either (e_start_kwh,e_end_kwh) or gross_j or net_j");

    std::vector<TrialRecord> out;
    out.reserve(t.rows.size());
    std::set<int> seen;
    std::vector<int> duplicates;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        std::ostringstream ctx;
        ctx << origin << ":" << t.line_of(i);
        const std::string where = ctx.str();

        TrialRecord r;
        r.config_id = config_id;
        r.prompt_id = csv::parse_int(row[c_prompt], kModule, where + " prompt_id");
        if (r.prompt_id <= 0)
            throw SchemaError(kModule, where + ": prompt_id must be a positive integer");
        auto cat = parse_category(row[c_cat]);
        if (!cat)
            throw SchemaError(kModule, where + ": unknown category '" + row[c_cat] + "'");
        r.category = *cat;
        r.latency_s = csv::parse_double(row[c_lat], kModule, where + " latency_s");
        if (!(r.latency_s > 0))
            throw SchemaError(kModule, where + ": latency_s must be > 0");

        auto read_opt = [&](const std::optional<std::size_t>& col,
                            const char* name) -> std::optional<double> {
            if (!col || csv::trim(row[*col]).empty()) return std::nullopt;
            return csv::parse_double(row[*col], kModule, where + " " + name);
        };
        r.e_start_kwh = read_opt(c_es, "e_start_kwh");
        r.e_end_kwh = read_opt(c_ee, "e_end_kwh");
        r.gross_j = read_opt(c_gross, "gross_j");
        r.net_j = read_opt(c_net, "net_j");
        r.co2_kg = read_opt(c_co2, "co2_kg");

        if (r.e_start_kwh.has_value() != r.e_end_kwh.has_value())
            throw SchemaError(kModule, where + ": e_start_kwh and e_end_kwh must appear together");
        if (r.e_start_kwh && *r.e_end_kwh < *r.e_start_kwh)
            throw SchemaError(kModule, where + ": e_end_kwh < e_start_kwh (cumulative counter must not decrease)");

        if (!seen.insert(r.prompt_id).second) duplicates.push_back(r.prompt_id);
        out.push_back(std::move(r));
    }
    if (!duplicates.empty()) {
        std::ostringstream msg;
        msg << origin << ": duplicate prompt_id(s) for config '" << config_id << "':";
        for (int id : duplicates) msg << ' ' << id;
        throw SchemaError(kModule, msg.str());
    }
    return out;
}

std::vector<TrialRecord> ingest_trials(const std::string& path, const std::string& config_id) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(kModule, "cannot open file: " + path);
    return ingest_trials(f, path, config_id);
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials) {
    csv::write_row(out, {"prompt_id", "category", "latency_s", "e_start_kwh", "e_end_kwh",
                         "gross_j", "net_j", "co2_kg"});
    for (const auto& r : trials) {
        csv::write_row(out, {std::to_string(r.prompt_id), std::string(to_string(r.category)),
                             fmt_double(r.latency_s), opt_cell(r.e_start_kwh), opt_cell(r.e_end_kwh),
                             opt_cell(r.gross_j), opt_cell(r.net_j), opt_cell(r.co2_kg)});
    }
}

// --- scores ------------------------------------------------------------------

ScoreMatrix ingest_scores(std::istream& in, const std::string& origin,
                          const std::string& config_id) {
    csv::Table t = csv::read_stream(in, origin, kModule);

    const std::size_t c_prompt = t.require_column("prompt_id", kModule);
    const std::size_t c_rater = t.require_column("rater_id", kModule);
    const std::size_t c_type = t.require_column("rater_type", kModule);
    std::array<std::size_t, 4> c_dim{};
    for (Dimension d : kDimensions)
        c_dim[dim_index(d)] = t.require_column(to_string(d), kModule);

    ScoreMatrix m;
    m.config_id = config_id;
    std::set<std::tuple<int, std::string, Dimension>> seen;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        std::ostringstream ctx;
        ctx << origin << ":" << t.line_of(i);
        const std::string where = ctx.str();

        const int prompt = csv::parse_int(row[c_prompt], kModule, where + " prompt_id");
        if (prompt <= 0)
            throw SchemaError(kModule, where + ": prompt_id must be a positive integer");
        const std::string rater = csv::trim(row[c_rater]);
        if (rater.empty()) throw SchemaError(kModule, where + ": empty rater_id");
        auto type = parse_rater_type(row[c_type]);
        if (!type)
            throw SchemaError(kModule, where + ": rater_type must be 'human' or 'ai', got '" +
                                           row[c_type] + "'");

        for (Dimension d : kDimensions) {
            const std::string cell = csv::trim(row[c_dim[dim_index(d)]]);
            if (cell.empty()) continue;  // missing score
            // Integers only; a float here is a data defect, not something to round.
            const int score = csv::parse_int(cell, kModule,
                                             where + " " + std::string(to_string(d)));
            if (score < 1 || score > 10) {
                std::ostringstream msg;
                msg << where << ": score " << score << " for rater " << rater << " column "
                    << to_string(d) << " outside [1,10]";
                throw SchemaError(kModule, msg.str());
            }
            if (!seen.insert({prompt, rater, d}).second) {
                std::ostringstream msg;
                msg << where << ": duplicate score for (prompt " << prompt << ", rater " << rater
                    << ", " << to_string(d) << ")";
                throw SchemaError(kModule, msg.str());
            }
            m.entries.push_back({prompt, rater, *type, d, score});
        }
    }
    return m;
}

ScoreMatrix ingest_scores(const std::string& path, const std::string& config_id) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(kModule, "cannot open file: " + path);
    return ingest_scores(f, path, config_id);
}

void write_scores_csv(std::ostream& out, const ScoreMatrix& scores) {
    csv::write_row(out, {"prompt_id", "rater_id", "rater_type", "CA", "CC", "SQ", "LA"});
    // Group entries back into one row per (prompt, rater), first-seen order by id.
    struct RowKey {
        int prompt;
        std::string rater;
        bool operator<(const RowKey& o) const {
            return prompt != o.prompt ? prompt < o.prompt : rater < o.rater;
        }
    };
    std::map<RowKey, std::pair<RaterType, std::array<std::optional<int>, 4>>> rows;
    for (const auto& e : scores.entries) {
        auto& slot = rows[{e.prompt_id, e.rater_id}];
        slot.first = e.rater_type;
        slot.second[dim_index(e.dimension)] = e.score;
    }
    for (const auto& [key, val] : rows) {
        std::vector<std::string> cells = {std::to_string(key.prompt), key.rater,
                                          std::string(to_string(val.first))};
        for (const auto& s : val.second)
            cells.push_back(s ? std::to_string(*s) : std::string());
        csv::write_row(out, cells);
    }
}

// --- pairing -----------------------------------------------------------------

PairedTrials join_paired(std::span<const TrialRecord> a, std::span<const TrialRecord> b) {
    std::map<int, const TrialRecord*> bm;
    for (const auto& t : b) bm[t.prompt_id] = &t;

    std::map<int, const TrialRecord*> am;
    for (const auto& t : a) am[t.prompt_id] = &t;

    PairedTrials out;
    for (const auto& [id, ta] : am) {
        auto it = bm.find(id);
        if (it != bm.end())
            out.pairs.emplace_back(*ta, *it->second);
        else
            ++out.unpaired;
    }
    for (const auto& [id, tb] : bm)
        if (!am.count(id)) ++out.unpaired;

    if (out.pairs.empty())
        throw InsufficientDataError(kModule, "no common prompt_ids between the two slices");
    return out;
}

// --- tracker log adapter -------------------------------------------------------

std::vector<SnapshotInterval> read_tracker_log(std::istream& in, const std::string& origin) {
    csv::Table t = csv::read_stream(in, origin, kModule);
    t.require_column("timestamp", kModule);
    const std::size_t c_dur = t.require_column("duration", kModule);
    const std::size_t c_energy = t.require_column("energy_consumed", kModule);

    std::vector<SnapshotInterval> out;
    std::optional<double> prev_t, prev_e;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::ostringstream ctx;
        ctx << origin << ":" << t.line_of(i);
        const double dur = csv::parse_double(t.rows[i][c_dur], kModule, ctx.str() + " duration");
        const double e = csv::parse_double(t.rows[i][c_energy], kModule, ctx.str() + " energy_consumed");
        if (prev_t) {
            if (e < *prev_e)
                throw SchemaError(kModule, ctx.str() + ": cumulative energy decreased");
            if (dur < *prev_t)
                throw SchemaError(kModule, ctx.str() + ": cumulative duration decreased");
            out.push_back({*prev_t, dur, *prev_e, e});
        }
        prev_t = dur;
        prev_e = e;
    }
    return out;
}

std::vector<SnapshotInterval> read_tracker_log(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(kModule, "cannot open file: " + path);
    return read_tracker_log(f, path);
}

}  // namespace lpw
