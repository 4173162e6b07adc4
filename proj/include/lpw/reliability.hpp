#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpw/dataset.hpp"

namespace lpw::reliability {

// Ratings laid out items x raters; std::nullopt marks a missing cell.
using RatingMatrix = std::vector<std::vector<std::optional<int>>>;

// Krippendorff's alpha with the ordinal difference metric (squared cumulative
// marginal sums between categories), computed from the coincidence matrix.
// Returns nullopt when expected disagreement is zero (all pairable values
// identical) -- an explicitly undefined outcome, distinct from low agreement.
std::optional<double> krippendorff_alpha_ordinal(const RatingMatrix& matrix,
                                                 const std::vector<int>& scale,
                                                 bool allow_missing = true);

// ICC(2,1): two-way random effects, single measure, absolute agreement.
// Listwise deletion: only complete rows enter the ANOVA. Returns nullopt when
// the denominator vanishes (constant matrix).
std::optional<double> icc_2_1(const RatingMatrix& matrix);

enum class PanelGroup { Human, Ai, Combined };
std::string_view to_string(PanelGroup g);

// Items x raters view of a score matrix for one rubric dimension, or for all
// four stacked as separate items when dimension is nullopt ("overall").
// Raters are ordered by rater_id; items by (prompt_id, dimension).
RatingMatrix rating_matrix(const ScoreMatrix& scores, PanelGroup group,
                           std::optional<Dimension> dimension);

struct ReliabilityCell {
    std::optional<double> alpha;
    std::optional<double> icc;
};

struct ReliabilityReport {
    PanelGroup group = PanelGroup::Human;
    std::array<ReliabilityCell, 4> per_dimension;  // CA,CC,SQ,LA
    ReliabilityCell overall;
    int n_raters = 0;
    int n_items = 0;  // prompts
};

ReliabilityReport reliability_report(const ScoreMatrix& scores, PanelGroup group);

// Pearson r between per-prompt mean human and mean AI scores; nullopt when
// either series has zero variance. Dimension nullopt = prompt-level mean of
// the available dimension means.
std::optional<double> human_ai_correlation(const ScoreMatrix& scores,
                                           std::optional<Dimension> dimension);

// Between-rater vs within-rater variance split for one rater group and
// dimension: how much of the spread is severity calibration rather than
// disagreement about item ordering.
struct SeverityDecomposition {
    std::vector<std::pair<std::string, double>> rater_means;  // sorted by rater_id
    double between_var = 0.0;            // sample variance of rater means
    double mean_within_var = 0.0;        // mean of per-rater sample variances
    std::optional<double> ratio;         // between/within, undefined when within == 0
    std::vector<std::string> excluded;   // raters with < 2 scores
};

SeverityDecomposition severity_decomposition(const ScoreMatrix& scores, RaterType group,
                                             Dimension dimension);

}  // namespace lpw::reliability
