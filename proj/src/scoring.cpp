#include "lpw/scoring.hpp"

#include <cmath>
#include <map>

#include "lpw/errors.hpp"

namespace lpw::scoring {

namespace {
constexpr const char* kModule = "scoring";
constexpr double kWeightTolerance = 1e-9;
}  // namespace

std::string_view to_string(AggregationMode m) {
    switch (m) {
        case AggregationMode::HumanOnly: return "human_only";
        case AggregationMode::AiOnly: return "ai_only";
        case AggregationMode::Weighted: return "weighted";
    }
    return "?";
}

void AggregationScheme::validate() const {
    double sum = 0.0;
    for (double w : dimension_weights) {
        if (w < 0)
            throw SchemaError(kModule, "scheme '" + id + "': negative dimension weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTolerance)
        throw SchemaError(kModule, "scheme '" + id + "': dimension weights sum to " +
                                       std::to_string(sum) + ", expected 1");
    if (human_weight < 0 || human_weight > 1)
        throw SchemaError(kModule, "scheme '" + id + "': human_weight outside [0,1]");
}

namespace {

AggregationScheme make(std::string id, AggregationMode mode, double hw,
                       std::array<double, 4> dw) {
    AggregationScheme s;
    s.id = std::move(id);
    s.mode = mode;
    s.human_weight = hw;
    s.dimension_weights = dw;
    return s;
}

}  // namespace

std::vector<AggregationScheme> weighting_presets() {
    const double hw = 0.6;
    return {
        make("equal", AggregationMode::Weighted, hw, {0.25, 0.25, 0.25, 0.25}),
        make("ca_sq_heavy", AggregationMode::Weighted, hw, {0.35, 0.15, 0.35, 0.15}),
        make("ca_dominant", AggregationMode::Weighted, hw, {0.40, 0.20, 0.25, 0.15}),
        make("sq_dominant", AggregationMode::Weighted, hw, {0.25, 0.20, 0.40, 0.15}),
        make("la_down", AggregationMode::Weighted, hw, {0.30, 0.30, 0.30, 0.10}),
        make("la_up", AggregationMode::Weighted, hw, {0.20, 0.20, 0.20, 0.40}),
    };
}

std::vector<AggregationScheme> rater_mode_presets() {
    return {
        make("human_only", AggregationMode::HumanOnly, 1.0, {0.25, 0.25, 0.25, 0.25}),
        make("ai_only", AggregationMode::AiOnly, 0.0, {0.25, 0.25, 0.25, 0.25}),
        make("weighted", AggregationMode::Weighted, 0.6, {0.25, 0.25, 0.25, 0.25}),
    };
}

AggregationScheme preset(std::string_view name) {
    for (const auto& s : weighting_presets())
        if (s.id == name) return s;
    for (const auto& s : rater_mode_presets())
        if (s.id == name) return s;
    throw SchemaError(kModule, "unknown scheme preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& s : weighting_presets()) names.push_back(s.id);
    for (const auto& s : rater_mode_presets()) names.push_back(s.id);
    return names;
}

GroupMeans rater_means(const ScoreMatrix& scores, int prompt_id) {
    std::array<double, 4> h_sum{}, a_sum{};
    std::array<int, 4> h_n{}, a_n{};
    bool any = false;
    for (const auto& e : scores.entries) {
        if (e.prompt_id != prompt_id) continue;
        any = true;
        const std::size_t d = dim_index(e.dimension);
        if (e.rater_type == RaterType::Human) {
            h_sum[d] += e.score;
            ++h_n[d];
        } else {
            a_sum[d] += e.score;
            ++a_n[d];
        }
    }
    if (!any)
        throw InsufficientDataError(kModule, "no scores at all for prompt_id " +
                                                 std::to_string(prompt_id));
    GroupMeans m;
    for (std::size_t d = 0; d < 4; ++d) {
        if (h_n[d]) m.human[d] = h_sum[d] / h_n[d];
        if (a_n[d]) m.ai[d] = a_sum[d] / a_n[d];
    }
    return m;
}

QualityProfile weighted_quality(int prompt_id, const GroupMeans& means,
                                const AggregationScheme& scheme) {
    scheme.validate();
    QualityProfile p;
    p.prompt_id = prompt_id;
    p.h_bar = means.human;
    p.a_bar = means.ai;
    p.scheme_id = scheme.id;

    for (Dimension dim : kDimensions) {
        const std::size_t d = dim_index(dim);
        const auto& h = means.human[d];
        const auto& a = means.ai[d];
        const std::string label =
            "prompt " + std::to_string(prompt_id) + " dimension " + std::string(to_string(dim));
        switch (scheme.mode) {
            case AggregationMode::HumanOnly:
                if (!h) throw InsufficientDataError(kModule, label + ": no human scores");
                p.w[d] = *h;
                break;
            case AggregationMode::AiOnly:
                if (!a) throw InsufficientDataError(kModule, label + ": no AI scores");
                p.w[d] = *a;
                break;
            case AggregationMode::Weighted:
                if (!h || !a)
                    throw InsufficientDataError(
                        kModule, label + ": weighted mode needs both human and AI scores");
                p.w[d] = scheme.human_weight * *h + scheme.ai_weight() * *a;
                break;
        }
        p.q_ped += scheme.dimension_weights[d] * p.w[d];
    }
    return p;
}

std::vector<QualityProfile> quality_profiles(const ScoreMatrix& scores,
                                             const AggregationScheme& scheme) {
    std::vector<QualityProfile> out;
    for (int prompt : scores.prompt_ids())
        out.push_back(weighted_quality(prompt, rater_means(scores, prompt), scheme));
    return out;
}

std::vector<SweepRow> scheme_sweep(std::span<const ScoreMatrix> matrices,
                                   std::span<const AggregationScheme> schemes) {
    std::vector<SweepRow> rows;
    for (const auto& scheme : schemes) {
        for (const auto& m : matrices) {
            const auto profiles = quality_profiles(m, scheme);
            if (profiles.empty())
                throw InsufficientDataError(kModule, "config '" + m.config_id +
                                                         "' has no scored prompts");
            double sum = 0.0;
            for (const auto& p : profiles) sum += p.q_ped;
            rows.push_back({scheme.id, m.config_id, sum / static_cast<double>(profiles.size()),
                            static_cast<int>(profiles.size())});
        }
    }
    return rows;
}

}  // namespace lpw::scoring
