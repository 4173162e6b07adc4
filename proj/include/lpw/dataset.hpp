#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lpw {

// ---------------------------------------------------------------------------
// Canonical data model: per-trial inference telemetry and rater score
// matrices, ingested from delimited text files. Collections are immutable
// after construction and safe to share across readers.
// ---------------------------------------------------------------------------

enum class Category { Mathematics, Science, ProgrammingCS, Humanities, MetaCognition };
inline constexpr std::array<Category, 5> kCategories = {
    Category::Mathematics, Category::Science, Category::ProgrammingCS,
    Category::Humanities, Category::MetaCognition};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);  // case-insensitive

enum class Precision { FP16, NF4, Q4_K_M, F16, Other };
std::string_view to_string(Precision p);
std::optional<Precision> parse_precision(std::string_view s);

enum class CacheRegime { CacheOn, CacheOff, NotApplicable };
std::string_view to_string(CacheRegime r);
std::optional<CacheRegime> parse_cache_regime(std::string_view s);

enum class RaterType { Human, Ai };
std::string_view to_string(RaterType t);
std::optional<RaterType> parse_rater_type(std::string_view s);

// Rubric dimensions, canonical order.
enum class Dimension { CA, CC, SQ, LA };
inline constexpr std::array<Dimension, 4> kDimensions = {
    Dimension::CA, Dimension::CC, Dimension::SQ, Dimension::LA};
inline constexpr std::size_t dim_index(Dimension d) { return static_cast<std::size_t>(d); }
std::string_view to_string(Dimension d);

// One inference event. Energy fields are individually optional at ingest;
// the energy module fills gross_j/net_j so that net_j >= clamp floor holds
// for every accounted trial.
struct TrialRecord {
    std::string config_id;
    int prompt_id = 0;
    Category category = Category::Mathematics;
    double latency_s = 0.0;
    std::optional<double> e_start_kwh;
    std::optional<double> e_end_kwh;
    std::optional<double> gross_j;
    std::optional<double> net_j;
    std::optional<double> co2_kg;  // pass-through, never computed here

    bool operator==(const TrialRecord&) const = default;
};

struct ConfigDescriptor {
    std::string config_id;
    Precision precision = Precision::Other;
    CacheRegime cache_regime = CacheRegime::NotApplicable;
    std::string hardware;
    double idle_power_w = 0.0;
};

struct ScoreEntry {
    int prompt_id = 0;
    std::string rater_id;
    RaterType rater_type = RaterType::Human;
    Dimension dimension = Dimension::CA;
    int score = 0;  // 1..10

    bool operator==(const ScoreEntry&) const = default;
};

struct ScoreMatrix {
    std::string config_id;
    std::vector<ScoreEntry> entries;

    std::vector<int> prompt_ids() const;                                  // sorted unique
    std::vector<std::string> rater_ids(std::optional<RaterType> t = {}) const;  // sorted unique
};

struct Dataset {
    std::vector<ConfigDescriptor> configs;
    std::vector<TrialRecord> trials;
    std::vector<ScoreMatrix> scores;

    const ConfigDescriptor* find_config(std::string_view config_id) const;
    std::vector<TrialRecord> trials_for(std::string_view config_id) const;  // sorted by prompt_id
    const ScoreMatrix* scores_for(std::string_view config_id) const;

    // Every trial and score matrix must resolve to a ConfigDescriptor.
    void validate() const;
};

// --- ingestion --------------------------------------------------------------

// Trial CSV: prompt_id,category,latency_s,e_start_kwh,e_end_kwh,gross_j,net_j,co2_kg
// (energy columns individually optional; at least one energy column required).
// Unknown extra columns are ignored.
std::vector<TrialRecord> ingest_trials(const std::string& path, const std::string& config_id);
std::vector<TrialRecord> ingest_trials(std::istream& in, const std::string& origin,
                                       const std::string& config_id);

// Score CSV: prompt_id,rater_id,rater_type,CA,CC,SQ,LA. Blank score = missing.
// Scores must be integers in [1,10]; floats are rejected, never rounded.
ScoreMatrix ingest_scores(const std::string& path, const std::string& config_id);
ScoreMatrix ingest_scores(std::istream& in, const std::string& origin,
                          const std::string& config_id);

// Canonical emit; ingest(emit(x)) == x field for field.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> trials);
void write_scores_csv(std::ostream& out, const ScoreMatrix& scores);

// --- pairing ----------------------------------------------------------------

struct PairedTrials {
    std::vector<std::pair<TrialRecord, TrialRecord>> pairs;  // ascending prompt_id
    int unpaired = 0;  // ids present on exactly one side
};

// Pairs trials on prompt_id. Throws InsufficientDataError on empty intersection.
PairedTrials join_paired(std::span<const TrialRecord> a, std::span<const TrialRecord> b);

// --- emissions-tracker log adapter ------------------------------------------

// Cumulative interval between two consecutive tracker readings.
struct SnapshotInterval {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    double e_start_kwh = 0.0;
    double e_end_kwh = 0.0;
};

// Reads a tracker log CSV with columns timestamp,duration,energy_consumed
// (duration seconds and energy kWh, both cumulative) and converts the
// readings into N-1 snapshot pairs. Cumulative counters must not decrease.
std::vector<SnapshotInterval> read_tracker_log(const std::string& path);
std::vector<SnapshotInterval> read_tracker_log(std::istream& in, const std::string& origin);

}  // namespace lpw
