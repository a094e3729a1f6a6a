#include "stlf/error.hpp"
#include "stlf/regress.hpp"
#include "stlf/synth.hpp"

#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace stlf;

namespace {

DesignMatrix line_design() {
    DesignMatrix x;
    x.columns = {{"(Intercept)", {}, 0, 0}, {"T", {}, 1, 0}};
    x.values = {1, 0, 1, 1, 1, 2};
    x.target = {1, 3, 5};
    for (int i = 0; i < 3; ++i) {
        x.row_timestamps.push_back(HourlyTimestamp::from_hour_index(i));
        x.source_rows.push_back(static_cast<std::size_t>(i));
    }
    return x;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no Error thrown";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Ols, ExactLine) {
    const auto m = fit_ols(line_design());
    ASSERT_EQ(m.coefficients.size(), 2u);
    EXPECT_EQ(m.coefficients[0], 1.0);
    EXPECT_EQ(m.coefficients[1], 2.0);
    const auto y = predict(m, line_design());
    EXPECT_NEAR(y[0], 1.0, 1e-13);
    EXPECT_NEAR(y[1], 3.0, 1e-13);
    EXPECT_NEAR(y[2], 5.0, 1e-13);
    EXPECT_EQ(m.coefficient("T"), m.coefficients[1]);
    EXPECT_FALSE(m.coefficient("nope"));
}

TEST(Ols, DuplicateColumnIsRankDeficient) {
    const std::vector<double> x{1, 1, 1, 2, 2, 1, 3, 3, 1, 4, 4, 1};
    const std::vector<double> y{1, 2, 3, 4};
    EXPECT_EQ(kind_of([&] { solve_least_squares(x, 4, 3, y); }), ErrorKind::RankDeficient);
}

TEST(Ols, ZeroColumnAndTooFewRows) {
    const std::vector<double> x{1, 0, 1, 0, 1, 0};
    const std::vector<double> y{1, 2, 3};
    EXPECT_EQ(kind_of([&] { solve_least_squares(x, 3, 2, y); }), ErrorKind::RankDeficient);
    const std::vector<double> x2{1, 2, 3, 4};
    EXPECT_EQ(kind_of([&] { solve_least_squares(x2, 1, 4, std::vector<double>{1}); }), ErrorKind::RankDeficient);
    EXPECT_EQ(kind_of([&] { solve_least_squares(x2, 2, 2, std::vector<double>{1}); }), ErrorKind::LengthMismatch);
}

TEST(Ols, MatchesNormalEquationsOracle) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise;
    const std::size_t rows = 50, cols = 5;
    const auto x = oracle::random_design(rows, cols, rng);
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = noise(rng);
        for (std::size_t c = 0; c < cols; ++c) y[r] += x[r * cols + c] * static_cast<double>(c + 1);
    }
    const auto b = solve_least_squares(x, rows, cols, y);
    const auto ref = oracle::normal_equations(x, rows, cols, y);
    EXPECT_LT(oracle::max_rel_diff(b, ref), 1e-8);
}

TEST(Ols, InterceptOnlyPredictsMean) {
    DesignMatrix x;
    x.columns = {{"(Intercept)", {}, 0, 0}};
    x.values = {1, 1, 1, 1};
    x.target = {2, 4, 6, 8};
    x.row_timestamps.resize(4);
    x.source_rows = {0, 1, 2, 3};
    const auto m = fit_ols(x);
    EXPECT_NEAR(m.coefficients[0], 5.0, 1e-14);
    for (double v : predict(m, x)) EXPECT_NEAR(v, 5.0, 1e-14);
}

TEST(Ols, PredictSchemaMismatch) {
    const auto m = fit_ols(line_design());
    auto other = line_design();
    other.columns[1].label = "LL_1w";
    EXPECT_EQ(kind_of([&] { predict(m, other); }), ErrorKind::SchemaMismatch);
}

TEST(Metrics, Examples) {
    const std::vector<double> y{1, 2, 3, 4};
    const auto perfect = metrics(y, y, 1);
    EXPECT_EQ(perfect.mae, 0.0);
    EXPECT_EQ(perfect.r2, 1.0);
    EXPECT_EQ(perfect.n, 4u);

    const std::vector<double> zeros{0, 0};
    const std::vector<double> guess{1, 3};
    EXPECT_EQ(mean_absolute_error(zeros, guess), 2.0);
    EXPECT_EQ(kind_of([&] { r_squared(zeros, guess); }), ErrorKind::ZeroVariance);

    EXPECT_NEAR(adjusted_r_squared(0.9, 100, 10), 1.0 - 0.1 * 99.0 / 89.0, 1e-15);
    EXPECT_EQ(kind_of([] { adjusted_r_squared(0.9, 11, 10); }), ErrorKind::DegenerateDof);
    EXPECT_EQ(kind_of([&] { mean_absolute_error(y, zeros); }), ErrorKind::LengthMismatch);
}

TEST(Model, SerializeRoundTrip) {
    SynthConfig cfg;
    cfg.n_hours = 1200;
    const auto ds = generate_synthetic(cfg);
    const auto x = build_design_f2(ds.zone("WEST"));
    const auto [tr, te] = train_test_split(x, 0.7, 3);
    const auto m = fit_and_evaluate(tr, te);
    ASSERT_TRUE(m.test_stats);
    const auto back = FittedModel::deserialize(m.serialize());
    EXPECT_EQ(back, m);
    EXPECT_THROW(FittedModel::deserialize("garbage"), Error);
}

TEST(Model, RefitIsDeterministic) {
    SynthConfig cfg;
    cfg.n_hours = 1200;
    const auto ds = generate_synthetic(cfg);
    const auto x = build_design_f1(ds.zone("FAR_WEST"));
    const auto a = train_test_split(x, 0.7, 9);
    const auto b = train_test_split(x, 0.7, 9);
    EXPECT_EQ(fit_and_evaluate(a.first, a.second).coefficients, fit_and_evaluate(b.first, b.second).coefficients);
}

TEST(Model, ForecastMatchesPredictOnDesign) {
    SynthConfig cfg;
    cfg.n_hours = 1000;
    const auto ds = generate_synthetic(cfg);
    const auto x = build_design_f1(ds.zone("WEST"));
    const auto m = fit_ols(x);
    EXPECT_EQ(forecast(m, ds.zone("WEST")), predict(m, x));
}

TEST(Model, F2DropsColumnsAbsentFromTrainRows) {
    SynthConfig cfg;
    cfg.n_hours = 504;
    const auto ds = generate_synthetic(cfg);
    const auto x = build_design_f2(ds.zone("WEST"));
    // send every row of one day x hour cell to the test side
    const auto labels = x.labels();
    std::size_t cell = labels.size();
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (x.columns[c].indicators.size() == 2 && x.columns[c].temperature_power == 0) {
            cell = c;
            break;
        }
    }
    ASSERT_LT(cell, labels.size());
    std::vector<std::size_t> tr;
    std::vector<std::size_t> te;
    for (std::size_t r = 0; r < x.rows(); ++r) (x.at(r, cell) != 0.0 ? te : tr).push_back(r);
    const auto m = fit_and_evaluate(x.select_rows(tr), x.select_rows(te));
    EXPECT_EQ(m.labels.size(), labels.size() - 1);
    EXPECT_EQ(std::find(m.labels.begin(), m.labels.end(), labels[cell]), m.labels.end());
    ASSERT_TRUE(m.test_stats);
    EXPECT_EQ(m.test_stats->n, te.size());
    EXPECT_EQ(forecast(m, ds.zone("WEST")).size(), x.rows());

    // f1 never omits columns, so the same situation is an error there
    const auto x1 = build_design_f1(ds.zone("WEST"));
    std::vector<std::size_t> tr1;
    for (std::size_t r = 0; r < x1.rows(); ++r) {
        if (x1.row_timestamps[r].hour() != 5) tr1.push_back(r);
    }
    EXPECT_EQ(kind_of([&] { fit_and_evaluate(x1.select_rows(tr1), x1); }), ErrorKind::RankDeficient);
}
