#include "stlf/detect.hpp"
#include "stlf/error.hpp"
#include "stlf/synth.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stlf;
using namespace stlf::similarity;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

/// Noisy copy of a shared signal, so the pair looks like two correlated zones.
std::pair<std::vector<double>, std::vector<double>> pair_series(std::size_t n, std::uint64_t seed) {
    const auto base = noise(n, seed, 5.0);
    auto a = noise(n, seed + 1), b = noise(n, seed + 2);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] += base[i] + 10.0 * std::sin(i * 0.26);
        b[i] += base[i] + 10.0 * std::sin(i * 0.26);
    }
    return {a, b};
}

Baseline manual_baseline(double mean, double sd) {
    Baseline b;
    b.window_length = 168;
    b.n_windows = 50;
    for (auto& m : b.measures) {
        m.mean = mean;
        m.sd = sd;
        m.n = 50;
    }
    return b;
}

SimilarityVector vector_with(double value) {
    SimilarityVector v;
    v.length = 168;
    for (auto& x : v.values) x = value;
    return v;
}

}  // namespace

TEST(Quantile, LinearInterpolation) {
    EXPECT_EQ(sample_quantile({1, 2, 3, 4, 5}, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(sample_quantile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(sample_quantile({4, 1, 3, 2}, 0.25), 1.75);
    EXPECT_EQ(sample_quantile({7}, 0.99), 7.0);
    EXPECT_EQ(sample_quantile({1, 9}, 0.0), 1.0);
    EXPECT_EQ(sample_quantile({1, 9}, 1.0), 9.0);
    EXPECT_THROW(sample_quantile({}, 0.5), Error);
    EXPECT_THROW(sample_quantile({1}, 1.5), Error);
}

TEST(Baseline, IdenticalWindowsAreExcluded) {
    const auto [a, b] = pair_series(168, 1);
    const auto v = similarity_vector(a, b);
    const std::vector<SimilarityVector> windows(25, v);
    const auto base = baseline_from_windows(windows, 168, {});
    for (Measure m : kAllMeasures) {
        EXPECT_EQ(base[m].sd, 0.0);
        EXPECT_TRUE(base[m].excluded) << measure_name(m);
    }
    const auto verdict = evaluate_vector(v, base, 3.0);
    EXPECT_FALSE(verdict.any_flag);
    EXPECT_EQ(verdict.eligible, 0u);
}

TEST(Baseline, NeedsEnoughWindows) {
    const auto [a, b] = pair_series(1000, 2);
    const std::vector<SimilarityVector> few(19, similarity_vector(a, b));
    EXPECT_THROW(baseline_from_windows(few, 1000, {}), Error);
    try {
        calibrate_baseline(a, b, 168, 10, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
    EXPECT_THROW(calibrate_baseline(std::span(a).first(100), std::span(b).first(100), 168, 50, 1), Error);
}

TEST(Baseline, ReproduciblePerSeed) {
    const auto [a, b] = pair_series(2000, 3);
    const auto b1 = calibrate_baseline(a, b, 168, 50, 42);
    const auto b2 = calibrate_baseline(a, b, 168, 50, 42);
    EXPECT_EQ(b1.to_csv(), b2.to_csv());
    const auto b3 = calibrate_baseline(a, b, 168, 50, 43);
    EXPECT_NE(b1.to_csv(), b3.to_csv());
    const auto& eu = b1[Measure::Euclidean];
    EXPECT_FALSE(eu.excluded);
    EXPECT_EQ(eu.n, 50u);
    EXPECT_LE(eu.quantiles[0], eu.quantiles[2]);
    EXPECT_LE(eu.quantiles[2], eu.quantiles[4]);
}

TEST(Baseline, BootstrapStartsInRange) {
    const auto s = bootstrap_starts(500, 168, 1000, 9);
    ASSERT_EQ(s.size(), 1000u);
    std::size_t hi = 0;
    for (auto v : s) hi = std::max(hi, v);
    EXPECT_LE(hi, 500u - 168u);
    EXPECT_EQ(s, bootstrap_starts(500, 168, 1000, 9));
}

TEST(Verdict, ThresholdRule) {
    const auto base = manual_baseline(10.0, 2.0);
    const auto center = evaluate_vector(vector_with(10.0), base, 3.0);
    for (const auto& mv : center.measures) {
        EXPECT_FALSE(mv.flagged);
        EXPECT_DOUBLE_EQ(mv.g, -6.0);
        EXPECT_EQ(mv.z, 0.0);
    }
    const auto far = evaluate_vector(vector_with(10.0 + 4.0 * 2.0), base, 3.0);
    for (const auto& mv : far.measures) {
        EXPECT_TRUE(mv.flagged);
        EXPECT_DOUBLE_EQ(mv.z, 4.0);
    }
    EXPECT_EQ(far.votes, kMeasureCount);
    EXPECT_TRUE(far.k_of_n(kMeasureCount));
    EXPECT_FALSE(far.k_of_n(0));
    const auto low = evaluate_vector(vector_with(10.0 - 4.0 * 2.0), base, 3.0);
    EXPECT_TRUE(low.any_flag);  // two-sided
    const auto edge = evaluate_vector(vector_with(16.0), base, 3.0);
    EXPECT_FALSE(edge.any_flag);  // g = 0 is not a flag
}

TEST(Verdict, ParameterMismatch) {
    const auto base = manual_baseline(0.0, 1.0);
    auto v = vector_with(0.0);
    v.length = 100;
    try {
        evaluate_vector(v, base, 3.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParameterMismatch);
    }
    v.length = 168;
    v.params.max_lag = 24;
    EXPECT_THROW(evaluate_vector(v, base, 3.0), Error);
    EXPECT_THROW(evaluate_vector(vector_with(0.0), base, 0.0), Error);
    const auto [a, b] = pair_series(100, 4);
    EXPECT_THROW(evaluate_constraints(a, b, base), Error);
}

TEST(Verdict, CsvShape) {
    const auto [a, b] = pair_series(2000, 5);
    const auto base = calibrate_baseline(a, b, 168, 30, 1);
    const auto v = evaluate_constraints(std::span(a).first(168), std::span(b).first(168), base);
    const auto header = verdicts_csv_header();
    const auto row = verdict_csv_row("w0", v);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Experiment, NullAttackMatchesFalsePositives) {
    SynthConfig sc;
    sc.n_hours = 2000;
    const auto ds = generate_synthetic(sc);
    ExperimentConfig cfg;
    cfg.attack.target_zone = "WEST";
    cfg.reference_zone = "FAR_WEST";
    cfg.attack.sd = 0.0;
    cfg.n_trials = 20;
    const auto r = detection_experiment(ds, cfg);
    EXPECT_EQ(r.detection_rate, r.false_positive_rate);
    EXPECT_EQ(r.measure_detection_rate, r.measure_false_positive_rate);
    EXPECT_EQ(r.mean_forecast_shift, 0.0);
    EXPECT_EQ(r.attacked_verdicts.size(), 20u);
}

TEST(Experiment, UnitGaussianMovesEveryDefinedFamily) {
    SynthConfig sc;
    sc.n_hours = 2000;
    const auto ds = generate_synthetic(sc);
    ExperimentConfig cfg;
    cfg.attack.target_zone = "WEST";
    cfg.reference_zone = "FAR_WEST";
    cfg.n_trials = 10;
    const auto r = detection_experiment(ds, cfg);
    EXPECT_GT(r.mean_forecast_shift, 0.0);
    for (const auto& fam : kFamilies) {
        const auto m = static_cast<std::size_t>(fam.measure);
        RecordProperty(std::string(measure_name(fam.measure)) + "_mean_abs_z", std::to_string(r.mean_abs_z[m]));
        if (fam.measure != Measure::Sax) EXPECT_GT(r.mean_abs_z[m], 0.0) << fam.label;
    }
    const auto csv = experiment_summary_csv(cfg, r);
    EXPECT_NE(csv.find("detection_rate"), std::string::npos);
}

TEST(Experiment, ConfigErrors) {
    SynthConfig sc;
    sc.n_hours = 1000;
    const auto ds = generate_synthetic(sc);
    ExperimentConfig cfg;
    cfg.attack.target_zone = "WEST";
    cfg.reference_zone = "WEST";
    EXPECT_THROW(prepare_experiment(ds, cfg), Error);
    cfg.attack.target_zone = "NOPE";
    cfg.reference_zone = "WEST";
    EXPECT_THROW(prepare_experiment(ds, cfg), Error);
}
