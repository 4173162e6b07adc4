#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpw/dataset.hpp"

namespace lpw::scoring {

enum class AggregationMode { HumanOnly, AiOnly, Weighted };
std::string_view to_string(AggregationMode m);

// How rater scores collapse into one quality number per response: a
// human/AI group weighting plus per-dimension weights over CA,CC,SQ,LA.
struct AggregationScheme {
    std::string id;
    AggregationMode mode = AggregationMode::Weighted;
    double human_weight = 0.6;                                      // ai = 1 - human
    std::array<double, 4> dimension_weights{0.25, 0.25, 0.25, 0.25};  // CA,CC,SQ,LA

    double ai_weight() const { return 1.0 - human_weight; }
    // Rejects (rather than renormalizes) weights that do not sum to 1
    // within 1e-9 or fall outside [0,1].
    void validate() const;
};

// Named presets addressable from the CLI and the sweep tables.
// Dimension-weight presets: equal, ca_sq_heavy, ca_dominant, sq_dominant,
// la_down, la_up. Rater-mode presets: human_only, ai_only, weighted.
AggregationScheme preset(std::string_view name);
std::vector<AggregationScheme> weighting_presets();
std::vector<AggregationScheme> rater_mode_presets();
std::vector<std::string> preset_names();

// Per-dimension group means for one prompt; a group with no present score
// in a dimension is marked missing.
struct GroupMeans {
    std::array<std::optional<double>, 4> human;
    std::array<std::optional<double>, 4> ai;
};

GroupMeans rater_means(const ScoreMatrix& scores, int prompt_id);

struct QualityProfile {
    int prompt_id = 0;
    std::array<std::optional<double>, 4> h_bar;
    std::array<std::optional<double>, 4> a_bar;
    std::array<double, 4> w{};  // weighted dimension scores
    double q_ped = 0.0;
    std::string scheme_id;
};

QualityProfile weighted_quality(int prompt_id, const GroupMeans& means,
                                const AggregationScheme& scheme);

// One profile per prompt present in the matrix, ascending prompt_id.
std::vector<QualityProfile> quality_profiles(const ScoreMatrix& scores,
                                             const AggregationScheme& scheme);

struct SweepRow {
    std::string scheme_id;
    std::string config_id;
    double mean_q_ped = 0.0;
    int n_prompts = 0;
};

// Mean q_ped per (scheme, config); rows ordered schemes-major in input order.
std::vector<SweepRow> scheme_sweep(std::span<const ScoreMatrix> matrices,
                                   std::span<const AggregationScheme> schemes);

}  // namespace lpw::scoring
