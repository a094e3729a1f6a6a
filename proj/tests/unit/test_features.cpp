#include "stlf/error.hpp"
#include "stlf/features.hpp"
#include "stlf/synth.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace stlf;

namespace {

ZoneSeries make_zone(std::size_t n, HourlyTimestamp start = {2020, 6, 1, 0}, double temp = 80.0) {
    std::vector<double> load(n);
    std::vector<double> t(n, temp);
    for (std::size_t i = 0; i < n; ++i) {
        load[i] = 1000.0 + static_cast<double>(i % 24) * 10.0;
        t[i] = temp + static_cast<double>(i % 7);
    }
    return {TimeSeries(Unit::MW, start, load), TimeSeries(Unit::DegF, start, t)};
}

ZoneSeries synthetic_zone(std::size_t hours, HourlyTimestamp start) {
    SynthConfig cfg;
    cfg.n_hours = hours;
    cfg.start = start;
    return generate_synthetic(cfg).zone("WEST");
}

}  // namespace

TEST(Features, ModelKindParsing) {
    EXPECT_EQ(parse_model_kind("F1"), ModelKind::F1);
    EXPECT_EQ(parse_model_kind("f2"), ModelKind::F2);
    EXPECT_THROW(parse_model_kind("f3"), Error);
    EXPECT_STREQ(to_string(ModelKind::F2), "f2");
}

TEST(Features, DayLevels) {
    EXPECT_EQ(day_level(HourlyTimestamp(2020, 6, 1, 0)), 0);  // Monday
    EXPECT_EQ(day_level(HourlyTimestamp(2020, 6, 7, 0)), 5);  // Sunday
    EXPECT_EQ(day_level(HourlyTimestamp(2020, 6, 6, 0)), 5);  // Saturday
    EXPECT_EQ(day_level(HourlyTimestamp(2020, 6, 2, 0)), 1);  // Tuesday
    EXPECT_EQ(level_name(Factor::Hour, 7), "H[07]");
    EXPECT_EQ(level_name(Factor::Day, 5), "D[WEEKEND]");
}

TEST(Features, F1RowAndColumnCount) {
    const auto x = build_design_f1(make_zone(400));
    EXPECT_EQ(x.rows(), 64u);
    // 1 + T + 23 hour + 5 day dummies + two lags.
    EXPECT_EQ(x.cols(), 32u);
    EXPECT_TRUE(x.omitted.empty());
    EXPECT_EQ(x.labels().front(), "(Intercept)");
    EXPECT_EQ(x.labels()[1], "T");
    EXPECT_EQ(x.labels()[30], "LL_1w");
    EXPECT_EQ(x.labels()[31], "LL_2w");
    EXPECT_EQ(x.source_rows.front(), 336u);
}

TEST(Features, F1LagColumnsReadLoadHistory) {
    const auto zone = make_zone(400);
    const auto x = build_design_f1(zone);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const std::size_t i = x.source_rows[r];
        EXPECT_EQ(x.at(r, 30), zone.load[i - 168]);
        EXPECT_EQ(x.at(r, 31), zone.load[i - 336]);
        EXPECT_EQ(x.at(r, 1), zone.temperature[i]);
        EXPECT_EQ(x.target[r], zone.load[i]);
    }
}

TEST(Features, F1ConstantTemperaturePassesThrough) {
    auto zone = make_zone(400);
    zone.temperature = zone.temperature.with_values(std::vector<double>(400, 75.0));
    const auto x = build_design_f1(zone);
    for (std::size_t r = 0; r < x.rows(); ++r) EXPECT_EQ(x.at(r, 1), 75.0);
}

TEST(Features, F1TooShort) {
    try {
        build_design_f1(make_zone(336));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
}

TEST(Features, F2SingleMonthOmitsAbsentMonths) {
    const auto x = build_design_f2(synthetic_zone(30 * 24, {2020, 6, 1, 0}));
    EXPECT_EQ(x.rows(), 720u);
    // 11 absent months x 3 powers.
    EXPECT_EQ(x.omitted.size(), 33u);
    for (const auto& l : x.omitted) EXPECT_EQ(l.substr(0, 2), "M[");
    for (const auto& l : x.labels()) EXPECT_EQ(l.find("M[JAN]"), std::string::npos);
    EXPECT_NE(std::find(x.omitted.begin(), x.omitted.end(), "M[JAN]:T^3"), x.omitted.end());
}

TEST(Features, F2TemperatureInteractionsVanishAtZero) {
    auto zone = make_zone(24 * 14, {2020, 6, 1, 0});
    std::vector<double> t(zone.temperature.values().begin(), zone.temperature.values().end());
    t[100] = 0.0;
    zone.temperature = zone.temperature.with_values(t);
    const auto x = build_design_f2(zone);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (x.columns[c].depends_on_temperature()) EXPECT_EQ(x.at(100, c), 0.0) << x.columns[c].label;
    }
}

TEST(Features, F2FullYearColumnCount) {
    const auto zone = synthetic_zone(366 * 24, {2020, 1, 1, 0});
    const auto x = build_design_f2(zone);

    // Count from the data: one column per level combination actually present.
    std::set<int> days, hours, months;
    std::set<std::pair<int, int>> day_hour;
    for (std::size_t i = 0; i < zone.load.size(); ++i) {
        const auto ts = zone.load.timestamp(i);
        days.insert(std::min(ts.weekday(), 5));
        hours.insert(ts.hour());
        months.insert(ts.month());
        day_hour.insert({std::min(ts.weekday(), 5), ts.hour()});
    }
    std::size_t cross = 0;
    for (auto [d, h] : day_hour) cross += d != 0 && h != 0;
    const std::size_t expected =
        1 + (days.size() - 1) + (hours.size() - 1) + cross + 3 * months.size() + 3 * (hours.size() - 1);
    EXPECT_EQ(x.cols(), expected);
    EXPECT_EQ(x.cols(), 249u);
    EXPECT_TRUE(x.omitted.empty());
    EXPECT_EQ(candidate_columns(ModelKind::F2).size(), 249u);
}

TEST(Features, WeekdayOnly) {
    DesignOptions opt;
    opt.weekday_only = true;
    const auto zone = make_zone(400);
    const auto x = build_design_f1(zone, opt);
    EXPECT_EQ(x.cols(), 31u);  // four day dummies
    for (const auto& ts : x.row_timestamps) EXPECT_FALSE(is_weekend(ts));
    EXPECT_EQ(candidate_columns(ModelKind::F2, opt).size(), 1 + 4 + 23 + 4 * 23 + 36 + 69u);
}

TEST(Features, BuildForColumnsAndSchemaMismatch) {
    const auto zone = make_zone(400);
    const auto full = build_design_f1(zone);
    const std::vector<std::string> labels{"(Intercept)", "T", "LL_1w"};
    const auto x = build_design_for_columns(ModelKind::F1, zone, {}, labels);
    EXPECT_EQ(x.cols(), 3u);
    EXPECT_EQ(x.at(5, 2), full.at(5, 30));
    const std::vector<std::string> bad{"(Intercept)", "nope"};
    try {
        build_design_for_columns(ModelKind::F1, zone, {}, bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaMismatch);
    }
}

TEST(Features, DerivativeMatchesPower) {
    const ColumnSpec cubic{"x", {{Factor::Hour, 3}}, 3, 0};
    RowContext ctx;
    ctx.hour = 3;
    ctx.temperature = 2.0;
    EXPECT_EQ(column_value(cubic, ctx), 8.0);
    EXPECT_EQ(column_temperature_derivative(cubic, ctx), 12.0);
    ctx.hour = 4;
    EXPECT_EQ(column_value(cubic, ctx), 0.0);
    EXPECT_EQ(column_temperature_derivative(cubic, ctx), 0.0);
}

TEST(Split, SizesAndDeterminism) {
    DesignMatrix x;
    x.columns = {{"(Intercept)", {}, 0, 0}};
    for (int i = 0; i < 10; ++i) {
        x.values.push_back(1.0);
        x.target.push_back(i);
        x.row_timestamps.push_back(HourlyTimestamp::from_hour_index(i));
        x.source_rows.push_back(static_cast<std::size_t>(i));
    }
    const auto [tr, te] = train_test_split(x, 0.7, 5);
    EXPECT_EQ(tr.rows(), 7u);
    EXPECT_EQ(te.rows(), 3u);
    const auto [tr2, te2] = train_test_split(x, 0.7, 5);
    EXPECT_EQ(tr.target, tr2.target);
    EXPECT_TRUE(std::is_sorted(tr.source_rows.begin(), tr.source_rows.end()));
    std::set<double> all(tr.target.begin(), tr.target.end());
    all.insert(te.target.begin(), te.target.end());
    EXPECT_EQ(all.size(), 10u);

    DesignMatrix two = x.select_rows(std::vector<std::size_t>{0, 1});
    try {
        train_test_split(two, 0.999, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateSplit);
    }
    EXPECT_THROW(train_test_split(x, 1.0, 1), Error);
}

TEST(Features, CsvExport) {
    const auto x = build_design_f1(make_zone(340));
    const auto csv = x.to_csv();
    EXPECT_EQ(csv.substr(0, 22), "timestamp,(Intercept),");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
