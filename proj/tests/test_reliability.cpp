#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpw/errors.hpp"
#include "lpw/reliability.hpp"

using namespace lpw;
using namespace lpw::reliability;

namespace {

// ---- independent oracles (kept deliberately naive; see also the frozen
// ---- values computed from them before the implementation was written)

// Coincidence-matrix alpha with the ordinal metric, straight from the
// definition: every ordered pair of present values within a unit, weighted
// 1/(m_u - 1).
double oracle_alpha_ordinal(const RatingMatrix& matrix, const std::vector<int>& scale) {
    const std::size_t K = scale.size();
    std::vector<std::vector<double>> o(K, std::vector<double>(K, 0.0));
    for (const auto& unit : matrix) {
        std::vector<std::size_t> vals;
        for (const auto& c : unit)
            if (c) vals.push_back(static_cast<std::size_t>(
                std::find(scale.begin(), scale.end(), *c) - scale.begin()));
        if (vals.size() < 2) continue;
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = 0; b < vals.size(); ++b)
                if (a != b) o[vals[a]][vals[b]] += 1.0 / static_cast<double>(vals.size() - 1);
    }
    std::vector<double> nc(K, 0.0);
    double n = 0;
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < K; ++k) {
            nc[c] += o[c][k];
        }
    for (double v : nc) n += v;
    auto delta2 = [&](std::size_t c, std::size_t k) {
        double s = 0;
        for (std::size_t g = std::min(c, k); g <= std::max(c, k); ++g) s += nc[g];
        s -= (nc[c] + nc[k]) / 2.0;
        return s * s;
    };
    double Do = 0, De = 0;
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < K; ++k) {
            Do += o[c][k] * delta2(c, k);
            De += nc[c] * nc[k] * delta2(c, k);
        }
    return 1.0 - (n - 1.0) * Do / De;
}

double oracle_alpha_nominal(const RatingMatrix& matrix, const std::vector<int>& scale) {
    const std::size_t K = scale.size();
    std::vector<std::vector<double>> o(K, std::vector<double>(K, 0.0));
    for (const auto& unit : matrix) {
        std::vector<std::size_t> vals;
        for (const auto& c : unit)
            if (c) vals.push_back(static_cast<std::size_t>(
                std::find(scale.begin(), scale.end(), *c) - scale.begin()));
        if (vals.size() < 2) continue;
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = 0; b < vals.size(); ++b)
                if (a != b) o[vals[a]][vals[b]] += 1.0 / static_cast<double>(vals.size() - 1);
    }
    std::vector<double> nc(K, 0.0);
    double n = 0, Do = 0, De = 0;
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < K; ++k) nc[c] += o[c][k];
    for (double v : nc) n += v;
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < K; ++k)
            if (c != k) {
                Do += o[c][k];
                De += nc[c] * nc[k];
            }
    return 1.0 - (n - 1.0) * Do / De;
}

// Two-way ANOVA sums of squares, written out longhand.
double oracle_icc21(const std::vector<std::vector<double>>& x) {
    const double n = static_cast<double>(x.size());
    const double k = static_cast<double>(x[0].size());
    double grand = 0;
    for (const auto& row : x)
        for (double v : row) grand += v;
    grand /= n * k;
    double ss_rows = 0, ss_cols = 0, ss_tot = 0;
    for (const auto& row : x) {
        double rm = 0;
        for (double v : row) rm += v;
        rm /= k;
        ss_rows += k * (rm - grand) * (rm - grand);
    }
    for (std::size_t j = 0; j < x[0].size(); ++j) {
        double cm = 0;
        for (const auto& row : x) cm += row[j];
        cm /= n;
        ss_cols += n * (cm - grand) * (cm - grand);
    }
    for (const auto& row : x)
        for (double v : row) ss_tot += (v - grand) * (v - grand);
    const double msr = ss_rows / (n - 1);
    const double msc = ss_cols / (k - 1);
    const double mse = (ss_tot - ss_rows - ss_cols) / ((n - 1) * (k - 1));
    return (msr - mse) / (msr + (k - 1) * mse + k * (msc - mse) / n);
}

RatingMatrix from_raters(const std::vector<std::vector<int>>& raters) {
    // raters[r][i] -> matrix[i][r]
    RatingMatrix m(raters[0].size(), std::vector<std::optional<int>>(raters.size()));
    for (std::size_t r = 0; r < raters.size(); ++r)
        for (std::size_t i = 0; i < raters[r].size(); ++i) m[i][r] = raters[r][i];
    return m;
}

ScoreMatrix scores_from(const std::string& rows) {
    std::istringstream in("prompt_id,rater_id,rater_type,CA,CC,SQ,LA\n" + rows);
    return ingest_scores(in, "test.csv", "cfg");
}

}  // namespace

TEST_CASE("alpha: perfect agreement with varying scores is 1") {
    auto m = from_raters({{1, 2, 3, 2}, {1, 2, 3, 2}});
    auto a = krippendorff_alpha_ordinal(m, {1, 2, 3});
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alpha: frozen oracle value for the 2x4 ordinal matrix") {
    // r1=(1,2,3,3), r2=(1,2,3,2) on scale 1..3. Oracle value recorded before
    // the implementation was written: exactly 79/100.
    auto m = from_raters({{1, 2, 3, 3}, {1, 2, 3, 2}});
    auto a = krippendorff_alpha_ordinal(m, {1, 2, 3});
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(0.79).epsilon(1e-12));
    CHECK(*a == doctest::Approx(oracle_alpha_ordinal(m, {1, 2, 3})).epsilon(1e-12));
}

TEST_CASE("alpha: constant data is undefined, not zero") {
    auto m = from_raters({{7, 7, 7}, {7, 7, 7}});
    auto a = krippendorff_alpha_ordinal(m, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(!a.has_value());
}

TEST_CASE("alpha: missing cells are excluded from pairing") {
    RatingMatrix m = from_raters({{1, 2, 3, 3}, {1, 2, 3, 2}});
    m.push_back({std::nullopt, 2});  // unpairable unit, must not change alpha
    auto with_single = krippendorff_alpha_ordinal(m, {1, 2, 3});
    auto base = krippendorff_alpha_ordinal(from_raters({{1, 2, 3, 3}, {1, 2, 3, 2}}), {1, 2, 3});
    CHECK(*with_single == doctest::Approx(*base).epsilon(1e-12));
}

TEST_CASE("alpha: fewer than two pairable items is an error") {
    RatingMatrix m = {{1, std::nullopt}, {std::nullopt, 2}, {3, std::nullopt}};
    CHECK_THROWS_AS(krippendorff_alpha_ordinal(m, {1, 2, 3}), InsufficientDataError);
}

TEST_CASE("alpha: on a two-category scale the ordinal metric degenerates to nominal") {
    auto m = from_raters({{1, 2, 1, 2, 1, 2}, {1, 2, 2, 2, 1, 1}});
    auto ordinal = krippendorff_alpha_ordinal(m, {1, 2});
    REQUIRE(ordinal.has_value());
    CHECK(*ordinal == doctest::Approx(oracle_alpha_nominal(m, {1, 2})).epsilon(1e-12));
}

TEST_CASE("ICC(2,1): identical raters with item variance give 1") {
    auto icc = icc_2_1(from_raters({{2, 5, 9, 4}, {2, 5, 9, 4}, {2, 5, 9, 4}}));
    REQUIRE(icc.has_value());
    CHECK(*icc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ICC(2,1): frozen oracle value for the 4x3 matrix") {
    // Items x raters matrix fixed before the implementation was written;
    // hand ANOVA gives MSR=17/3, MSC=31, MSE=2/3 and ICC = 20/119.
    std::vector<std::vector<double>> x = {{9, 2, 5}, {6, 1, 3}, {8, 4, 6}, {7, 1, 2}};
    RatingMatrix m = {{9, 2, 5}, {6, 1, 3}, {8, 4, 6}, {7, 1, 2}};
    auto icc = icc_2_1(m);
    REQUIRE(icc.has_value());
    CHECK(*icc == doctest::Approx(20.0 / 119.0).epsilon(1e-12));
    CHECK(*icc == doctest::Approx(0.16806722689075623).epsilon(1e-10));
    CHECK(*icc == doctest::Approx(oracle_icc21(x)).epsilon(1e-10));
}

TEST_CASE("ICC(2,1): constant matrix is undefined") {
    CHECK(!icc_2_1(from_raters({{4, 4, 4}, {4, 4, 4}})).has_value());
}

TEST_CASE("ICC(2,1): listwise deletion drops incomplete rows") {
    RatingMatrix complete = {{9, 2, 5}, {6, 1, 3}, {8, 4, 6}, {7, 1, 2}};
    RatingMatrix with_hole = complete;
    with_hole.push_back({5, std::nullopt, 4});
    CHECK(*icc_2_1(with_hole) == doctest::Approx(*icc_2_1(complete)).epsilon(1e-12));
}

TEST_CASE("ICC(2,1): insufficient data errors") {
    CHECK_THROWS_AS(icc_2_1(RatingMatrix{{1, 2}, {std::nullopt, 3}}), InsufficientDataError);
    CHECK_THROWS_AS(icc_2_1(RatingMatrix{{1}, {2}}), InsufficientDataError);
}

TEST_CASE("alpha and ICC are invariant under rater column permutation") {
    auto m = from_raters({{1, 5, 9, 4, 7}, {2, 5, 8, 3, 7}, {1, 6, 9, 5, 6}});
    auto perm = from_raters({{2, 5, 8, 3, 7}, {1, 6, 9, 5, 6}, {1, 5, 9, 4, 7}});
    const std::vector<int> scale = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(*krippendorff_alpha_ordinal(m, scale) ==
          doctest::Approx(*krippendorff_alpha_ordinal(perm, scale)).epsilon(1e-12));
    CHECK(*icc_2_1(m) == doctest::Approx(*icc_2_1(perm)).epsilon(1e-12));
}

TEST_CASE("ICC(2,1) never exceeds 1") {
    auto m = from_raters({{1, 5, 9, 4, 7}, {3, 5, 10, 3, 8}, {1, 4, 9, 5, 6}});
    CHECK(*icc_2_1(m) <= 1.0);
}

TEST_CASE("rating_matrix lays out items by prompt and raters by id") {
    auto scores = scores_from(
        "1,T1,human,8,7,6,5\n"
        "1,A,ai,9,9,9,9\n"
        "2,T1,human,4,4,4,4\n");
    auto human_ca = rating_matrix(scores, PanelGroup::Human, Dimension::CA);
    REQUIRE(human_ca.size() == 2);  // two prompts
    REQUIRE(human_ca[0].size() == 1);
    CHECK(*human_ca[0][0] == 8);
    CHECK(*human_ca[1][0] == 4);

    auto combined_all = rating_matrix(scores, PanelGroup::Combined, std::nullopt);
    CHECK(combined_all.size() == 8);     // 2 prompts x 4 dimensions
    CHECK(combined_all[0].size() == 2);  // A sorts before T1
    CHECK(*combined_all[0][0] == 9);
    CHECK(*combined_all[0][1] == 8);
    CHECK(!combined_all[4][0].has_value());  // prompt 2 has no AI scores
}

TEST_CASE("human_ai_correlation: identical series give r=1, mirrored give r=-1") {
    // AI mean equals human mean per prompt.
    auto equal = scores_from(
        "1,T1,human,2,2,2,2\n1,A,ai,2,2,2,2\n"
        "2,T1,human,5,5,5,5\n2,A,ai,5,5,5,5\n"
        "3,T1,human,9,9,9,9\n3,A,ai,9,9,9,9\n");
    CHECK(*human_ai_correlation(equal, std::nullopt) == doctest::Approx(1.0));

    // AI mean = 11 - human mean: perfect anticorrelation.
    auto mirrored = scores_from(
        "1,T1,human,2,2,2,2\n1,A,ai,9,9,9,9\n"
        "2,T1,human,5,5,5,5\n2,A,ai,6,6,6,6\n"
        "3,T1,human,9,9,9,9\n3,A,ai,2,2,2,2\n");
    CHECK(*human_ai_correlation(mirrored, std::nullopt) == doctest::Approx(-1.0));
}

TEST_CASE("human_ai_correlation: zero variance is undefined") {
    auto flat = scores_from(
        "1,T1,human,5,5,5,5\n1,A,ai,4,4,4,4\n"
        "2,T1,human,5,5,5,5\n2,A,ai,6,6,6,6\n"
        "3,T1,human,5,5,5,5\n3,A,ai,5,5,5,5\n");
    CHECK(!human_ai_correlation(flat, std::nullopt).has_value());
}

TEST_CASE("human_ai_correlation: needs three prompts") {
    auto two = scores_from(
        "1,T1,human,2,2,2,2\n1,A,ai,3,3,3,3\n"
        "2,T1,human,5,5,5,5\n2,A,ai,6,6,6,6\n");
    CHECK_THROWS_AS(human_ai_correlation(two, std::nullopt), InsufficientDataError);
}

TEST_CASE("severity_decomposition: between-var of shifted raters, zero within") {
    // r1 scores (5,5), r2 scores (7,7) on CA.
    auto scores = scores_from(
        "1,r1,human,5,,,\n2,r1,human,5,,,\n"
        "1,r2,human,7,,,\n2,r2,human,7,,,\n");
    auto dec = severity_decomposition(scores, RaterType::Human, Dimension::CA);
    CHECK(dec.between_var == doctest::Approx(2.0));  // sample variance of {5,7}
    CHECK(dec.mean_within_var == doctest::Approx(0.0));
    CHECK(!dec.ratio.has_value());
}

TEST_CASE("severity_decomposition: constant shifts move between, not within") {
    auto base = scores_from(
        "1,r1,human,4,,,\n2,r1,human,6,,,\n3,r1,human,5,,,\n"
        "1,r2,human,4,,,\n2,r2,human,6,,,\n3,r2,human,5,,,\n");
    auto shifted = scores_from(
        "1,r1,human,4,,,\n2,r1,human,6,,,\n3,r1,human,5,,,\n"
        "1,r2,human,7,,,\n2,r2,human,9,,,\n3,r2,human,8,,,\n");  // r2 + 3
    auto a = severity_decomposition(base, RaterType::Human, Dimension::CA);
    auto b = severity_decomposition(shifted, RaterType::Human, Dimension::CA);
    CHECK(a.mean_within_var == doctest::Approx(b.mean_within_var));
    CHECK(a.between_var == doctest::Approx(0.0));
    CHECK(b.between_var == doctest::Approx(4.5));  // sample variance of {5, 8}
    CHECK(b.rater_means[0].second == doctest::Approx(5.0));
    CHECK(b.rater_means[1].second == doctest::Approx(8.0));
}

TEST_CASE("severity_decomposition: raters with one score are excluded, all gone errors") {
    auto scores = scores_from(
        "1,r1,human,4,,,\n2,r1,human,6,,,\n"
        "1,r2,human,7,,,\n2,r2,human,9,,,\n"
        "1,r3,human,5,,,\n");
    auto dec = severity_decomposition(scores, RaterType::Human, Dimension::CA);
    REQUIRE(dec.excluded.size() == 1);
    CHECK(dec.excluded[0] == "r3");
    CHECK(dec.rater_means.size() == 2);

    auto tiny = scores_from("1,r1,human,4,,,\n1,r2,human,7,,,\n");
    CHECK_THROWS_AS(severity_decomposition(tiny, RaterType::Human, Dimension::CA),
                    InsufficientDataError);
}

TEST_CASE("reliability_report assembles per-dimension and overall cells") {
    std::string rows;
    for (int p = 1; p <= 6; ++p) {
        const int base = 3 + (p % 4);
        rows += std::to_string(p) + ",T1,human," + std::to_string(base) + "," +
                std::to_string(base + 1) + "," + std::to_string(base) + ",9\n";
        rows += std::to_string(p) + ",T2,human," + std::to_string(base) + "," +
                std::to_string(base + 2) + "," + std::to_string(base + 1) + ",9\n";
        rows += std::to_string(p) + ",A,ai," + std::to_string(base + 1) + "," +
                std::to_string(base + 1) + "," + std::to_string(base) + ",9\n";
    }
    auto scores = scores_from(rows);
    auto rep = reliability_report(scores, PanelGroup::Human);
    CHECK(rep.n_raters == 2);
    CHECK(rep.n_items == 6);
    CHECK(rep.per_dimension[dim_index(Dimension::CA)].alpha.has_value());
    CHECK(*rep.per_dimension[dim_index(Dimension::CA)].alpha == doctest::Approx(1.0));
    // LA is constant 9 everywhere: undefined, reported as such.
    CHECK(!rep.per_dimension[dim_index(Dimension::LA)].alpha.has_value());
    CHECK(rep.overall.alpha.has_value());

    auto combined = reliability_report(scores, PanelGroup::Combined);
    CHECK(combined.n_raters == 3);
}

TEST_CASE("alpha with allow_missing=false rejects missing cells") {
    RatingMatrix m = from_raters({{1, 2, 3, 3}, {1, 2, 3, 2}});
    m.push_back({std::nullopt, 2});
    CHECK_THROWS_AS(krippendorff_alpha_ordinal(m, {1, 2, 3}, /*allow_missing=*/false),
                    SchemaError);
    CHECK_NOTHROW(krippendorff_alpha_ordinal(m, {1, 2, 3}, /*allow_missing=*/true));
}

TEST_CASE("ICC(2,1): classic published 6x4 reference value") {
    // Widely reproduced textbook matrix; single-measure absolute agreement
    // under the two-way random model is 0.29.
    RatingMatrix m = {{9, 2, 5, 8}, {6, 1, 3, 2},  {8, 4, 6, 8},
                      {7, 1, 2, 6}, {10, 5, 6, 9}, {6, 2, 4, 7}};
    auto icc = icc_2_1(m);
    REQUIRE(icc.has_value());
    CHECK(*icc == doctest::Approx(0.289763779527559).epsilon(1e-12));
    CHECK(*icc == doctest::Approx(0.29).epsilon(1e-2));
}
