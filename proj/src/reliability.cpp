#include "lpw/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lpw/errors.hpp"

namespace lpw::reliability {

namespace {
constexpr const char* kModule = "reliability";
}

std::string_view to_string(PanelGroup g) {
    switch (g) {
        case PanelGroup::Human: return "human";
        case PanelGroup::Ai: return "ai";
        case PanelGroup::Combined: return "combined";
    }
    return "?";
}

std::optional<double> krippendorff_alpha_ordinal(const RatingMatrix& matrix,
                                                 const std::vector<int>& scale,
                                                 bool allow_missing) {
    if (scale.size() < 2)
        throw SchemaError(kModule, "scale needs at least two ordered categories");
    if (!std::is_sorted(scale.begin(), scale.end()))
        throw SchemaError(kModule, "scale categories must be in ascending order");

    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < scale.size(); ++i) index[scale[i]] = i;
    const std::size_t K = scale.size();

    // Coincidence matrix: every ordered pair of values within a unit,
    // weighted 1/(m_u - 1) so each unit contributes m_u pairable values.
    std::vector<std::vector<double>> o(K, std::vector<double>(K, 0.0));
    std::size_t pairable_units = 0;
    for (const auto& unit : matrix) {
        std::vector<std::size_t> vals;
        for (const auto& cell : unit) {
            if (!cell) {
                if (!allow_missing)
                    throw SchemaError(kModule, "missing cell with allow_missing=false");
                continue;
            }
            auto it = index.find(*cell);
            if (it == index.end())
                throw SchemaError(kModule, "value " + std::to_string(*cell) + " not on the scale");
            vals.push_back(it->second);
        }
        const std::size_t m = vals.size();
        if (m < 2) continue;
        ++pairable_units;
        const double w = 1.0 / static_cast<double>(m - 1);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (a != b) o[vals[a]][vals[b]] += w;
    }
    if (pairable_units < 2)
        throw InsufficientDataError(kModule,
                                    "need at least two items with two or more pairable values");

    std::vector<double> marginal(K, 0.0);
    double n = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t k = 0; k < K; ++k) marginal[c] += o[c][k];
        n += marginal[c];
    }

    // Ordinal distance: cumulative marginals between the two categories,
    // endpoints at half weight, squared.
    std::vector<double> cumulative(K + 1, 0.0);
    for (std::size_t c = 0; c < K; ++c) cumulative[c + 1] = cumulative[c] + marginal[c];
    auto delta2 = [&](std::size_t c, std::size_t k) {
        const auto lo = std::min(c, k), hi = std::max(c, k);
        const double between = cumulative[hi + 1] - cumulative[lo];
        const double d = between - (marginal[c] + marginal[k]) / 2.0;
        return d * d;
    };

    double observed = 0.0, expected = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t k = 0; k < K; ++k) {
            if (c == k) continue;
            const double d2 = delta2(c, k);
            observed += o[c][k] * d2;
            expected += marginal[c] * marginal[k] * d2;
        }
    }
    if (expected <= 0.0) return std::nullopt;  // all pairable values identical
    return 1.0 - (n - 1.0) * observed / expected;
}

std::optional<double> icc_2_1(const RatingMatrix& matrix) {
    std::vector<std::vector<double>> complete;
    std::size_t k = 0;
    for (const auto& row : matrix) {
        if (row.empty()) continue;
        if (k == 0) k = row.size();
        if (row.size() != k)
            throw SchemaError(kModule, "ragged rating matrix");
        if (std::all_of(row.begin(), row.end(), [](const auto& c) { return c.has_value(); })) {
            std::vector<double> r;
            r.reserve(k);
            for (const auto& c : row) r.push_back(static_cast<double>(*c));
            complete.push_back(std::move(r));
        }
    }
    const std::size_t n = complete.size();
    if (k < 2)
        throw InsufficientDataError(kModule, "ICC needs at least two raters");
    if (n < 2)
        throw InsufficientDataError(kModule, "ICC needs at least two complete items");

    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    double grand = 0.0;
    for (const auto& row : complete)
        for (double v : row) grand += v;
    grand /= nd * kd;

    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += complete[i][j] / kd;
            col_mean[j] += complete[i][j] / nd;
        }

    double ss_total = 0.0, ss_rows = 0.0, ss_cols = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double d = complete[i][j] - grand;
            ss_total += d * d;
        }
    for (double rm : row_mean) ss_rows += kd * (rm - grand) * (rm - grand);
    for (double cm : col_mean) ss_cols += nd * (cm - grand) * (cm - grand);
    const double ss_err = ss_total - ss_rows - ss_cols;

    const double msr = ss_rows / (nd - 1.0);
    const double msc = ss_cols / (kd - 1.0);
    const double mse = ss_err / ((nd - 1.0) * (kd - 1.0));

    const double denom = msr + (kd - 1.0) * mse + kd * (msc - mse) / nd;
    if (std::abs(denom) < 1e-300) return std::nullopt;  // constant matrix
    return (msr - mse) / denom;
}

RatingMatrix rating_matrix(const ScoreMatrix& scores, PanelGroup group,
                           std::optional<Dimension> dimension) {
    auto in_group = [&](RaterType t) {
        switch (group) {
            case PanelGroup::Human: return t == RaterType::Human;
            case PanelGroup::Ai: return t == RaterType::Ai;
            case PanelGroup::Combined: return true;
        }
        return false;
    };

    std::set<std::string> rater_set;
    for (const auto& e : scores.entries)
        if (in_group(e.rater_type)) rater_set.insert(e.rater_id);
    std::vector<std::string> raters(rater_set.begin(), rater_set.end());
    std::map<std::string, std::size_t> rater_col;
    for (std::size_t i = 0; i < raters.size(); ++i) rater_col[raters[i]] = i;

    const auto prompts = scores.prompt_ids();
    std::map<std::pair<int, int>, std::size_t> item_row;  // (prompt, dim or -1) -> row
    RatingMatrix m;
    auto row_for = [&](int prompt, int dim_key) -> std::vector<std::optional<int>>& {
        auto key = std::make_pair(prompt, dim_key);
        auto it = item_row.find(key);
        if (it == item_row.end()) {
            it = item_row.emplace(key, m.size()).first;
            m.emplace_back(raters.size());
        }
        return m[it->second];
    };
    // Pre-create rows in canonical (prompt, dimension) order.
    for (int p : prompts) {
        if (dimension) {
            row_for(p, static_cast<int>(dim_index(*dimension)));
        } else {
            for (Dimension d : kDimensions) row_for(p, static_cast<int>(dim_index(d)));
        }
    }
    for (const auto& e : scores.entries) {
        if (!in_group(e.rater_type)) continue;
        if (dimension && e.dimension != *dimension) continue;
        row_for(e.prompt_id, static_cast<int>(dim_index(e.dimension)))[rater_col[e.rater_id]] =
            e.score;
    }
    return m;
}

namespace {

const std::vector<int>& ten_point_scale() {
    static const std::vector<int> scale = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return scale;
}

ReliabilityCell cell_for(const RatingMatrix& m) {
    ReliabilityCell cell;
    try {
        cell.alpha = krippendorff_alpha_ordinal(m, ten_point_scale());
    } catch (const InsufficientDataError&) {
        cell.alpha = std::nullopt;
    }
    try {
        cell.icc = icc_2_1(m);
    } catch (const InsufficientDataError&) {
        cell.icc = std::nullopt;
    }
    return cell;
}

}  // namespace

ReliabilityReport reliability_report(const ScoreMatrix& scores, PanelGroup group) {
    ReliabilityReport report;
    report.group = group;
    for (Dimension d : kDimensions)
        report.per_dimension[dim_index(d)] = cell_for(rating_matrix(scores, group, d));
    report.overall = cell_for(rating_matrix(scores, group, std::nullopt));

    std::optional<RaterType> type;
    if (group == PanelGroup::Human) type = RaterType::Human;
    if (group == PanelGroup::Ai) type = RaterType::Ai;
    report.n_raters = static_cast<int>(scores.rater_ids(type).size());
    report.n_items = static_cast<int>(scores.prompt_ids().size());
    return report;
}

std::optional<double> human_ai_correlation(const ScoreMatrix& scores,
                                           std::optional<Dimension> dimension) {
    struct Sums {
        double h_sum = 0, a_sum = 0;
        int h_n = 0, a_n = 0;
    };
    // per prompt, per dimension
    std::map<int, std::array<Sums, 4>> acc;
    for (const auto& e : scores.entries) {
        auto& s = acc[e.prompt_id][dim_index(e.dimension)];
        if (e.rater_type == RaterType::Human) {
            s.h_sum += e.score;
            ++s.h_n;
        } else {
            s.a_sum += e.score;
            ++s.a_n;
        }
    }

    std::vector<double> h_series, a_series;
    for (const auto& [prompt, dims] : acc) {
        double h = 0, a = 0;
        int nh = 0, na = 0;
        for (Dimension d : kDimensions) {
            if (dimension && d != *dimension) continue;
            const auto& s = dims[dim_index(d)];
            if (s.h_n && s.a_n) {
                h += s.h_sum / s.h_n;
                a += s.a_sum / s.a_n;
                ++nh;
                ++na;
            }
        }
        if (nh == 0) continue;
        h_series.push_back(h / nh);
        a_series.push_back(a / na);
    }
    if (h_series.size() < 3)
        throw InsufficientDataError(kModule,
                                    "correlation needs at least three prompts with both group means");

    const double n = static_cast<double>(h_series.size());
    double mh = 0, ma = 0;
    for (std::size_t i = 0; i < h_series.size(); ++i) {
        mh += h_series[i];
        ma += a_series[i];
    }
    mh /= n;
    ma /= n;
    double shh = 0, saa = 0, sha = 0;
    for (std::size_t i = 0; i < h_series.size(); ++i) {
        const double dh = h_series[i] - mh, da = a_series[i] - ma;
        shh += dh * dh;
        saa += da * da;
        sha += dh * da;
    }
    if (shh <= 0.0 || saa <= 0.0) return std::nullopt;  // zero variance
    return sha / std::sqrt(shh * saa);
}

SeverityDecomposition severity_decomposition(const ScoreMatrix& scores, RaterType group,
                                             Dimension dimension) {
    std::map<std::string, std::vector<double>> by_rater;
    for (const auto& e : scores.entries)
        if (e.rater_type == group && e.dimension == dimension)
            by_rater[e.rater_id].push_back(e.score);

    SeverityDecomposition out;
    std::vector<double> means, within;
    for (const auto& [rater, vals] : by_rater) {
        if (vals.size() < 2) {
            out.excluded.push_back(rater);
            continue;
        }
        double m = 0;
        for (double v : vals) m += v;
        m /= static_cast<double>(vals.size());
        double var = 0;
        for (double v : vals) var += (v - m) * (v - m);
        var /= static_cast<double>(vals.size() - 1);
        out.rater_means.emplace_back(rater, m);
        means.push_back(m);
        within.push_back(var);
    }
    if (means.size() < 2)
        throw InsufficientDataError(kModule,
                                    "severity decomposition needs two raters with two or more scores");

    double grand = 0;
    for (double m : means) grand += m;
    grand /= static_cast<double>(means.size());
    double between = 0;
    for (double m : means) between += (m - grand) * (m - grand);
    between /= static_cast<double>(means.size() - 1);
    out.between_var = between;

    double w = 0;
    for (double v : within) w += v;
    out.mean_within_var = w / static_cast<double>(within.size());
    if (out.mean_within_var > 0) out.ratio = out.between_var / out.mean_within_var;
    return out;
}

}  // namespace lpw::reliability
