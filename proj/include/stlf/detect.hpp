#pragma once

#include "stlf/attack.hpp"
#include "stlf/regress.hpp"
#include "stlf/similarity.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stlf {

inline constexpr std::size_t kDefaultWindowHours = 168;
inline constexpr std::size_t kDefaultCalibrationWindows = 50;
inline constexpr std::size_t kMinCalibrationWindows = 20;
inline constexpr double kDefaultTau = 3.0;

inline constexpr std::array<double, 5> kBaselineQuantiles{0.01, 0.05, 0.5, 0.95, 0.99};

struct MeasureBaseline {
    double mean = 0.0;
    double sd = 0.0;  // N-1 denominator
    std::array<double, kBaselineQuantiles.size()> quantiles{};
    std::size_t n = 0;  // windows where the measure was defined
    /// Excluded measures never flag (zero spread or undefined on some window).
    bool excluded = false;
    std::string reason;
};

struct Baseline {
    similarity::SimilarityParams params;
    std::size_t window_length = 0;
    std::size_t n_windows = 0;
    std::array<MeasureBaseline, similarity::kMeasureCount> measures{};

    const MeasureBaseline& operator[](similarity::Measure m) const { return measures[static_cast<std::size_t>(m)]; }
    std::string to_csv() const;
};

/// Linear-interpolation sample quantile (type 7); q in [0, 1].
double sample_quantile(std::vector<double> x, double q);

/// Aggregates per-window similarity vectors into a baseline.
Baseline baseline_from_windows(std::span<const similarity::SimilarityVector> windows, std::size_t window_length,
                               const similarity::SimilarityParams& params);

/// Window start positions drawn uniformly with replacement from [0, n - window_length].
std::vector<std::size_t> bootstrap_starts(std::size_t n, std::size_t window_length, std::size_t n_windows,
                                          std::uint64_t seed);

/// Similarity vectors of x[s, s+L) vs y[s, s+L) for each start s, evaluated in parallel.
std::vector<similarity::SimilarityVector> window_vectors(std::span<const double> x, std::span<const double> y,
                                                         std::span<const std::size_t> starts,
                                                         std::size_t window_length,
                                                         const similarity::SimilarityParams& params);

/// Bootstrap calibration on a clean, aligned forecast pair.
Baseline calibrate_baseline(std::span<const double> x, std::span<const double> y, std::size_t window_length,
                            std::size_t n_windows, std::uint64_t seed, const similarity::SimilarityParams& params = {});

struct MeasureVerdict {
    std::optional<double> observed;
    double z = 0.0;
    double g = 0.0;
    bool flagged = false;
    bool excluded = false;
};

struct DetectionVerdict {
    std::array<MeasureVerdict, similarity::kMeasureCount> measures{};
    double tau = kDefaultTau;
    std::size_t votes = 0;      // flagged measures
    std::size_t eligible = 0;   // measures that could flag
    bool any_flag = false;

    const MeasureVerdict& operator[](similarity::Measure m) const { return measures[static_cast<std::size_t>(m)]; }
    bool k_of_n(std::size_t k) const noexcept { return k > 0 && votes >= k; }
};

/// z = (d - mu)/sigma, g = |d - mu| - tau*sigma, flagged iff g > 0.
DetectionVerdict evaluate_vector(const similarity::SimilarityVector& v, const Baseline& baseline, double tau);

/// Scores one forecast pair of exactly baseline.window_length hours.
DetectionVerdict evaluate_constraints(std::span<const double> x, std::span<const double> y, const Baseline& baseline,
                                      double tau = kDefaultTau);

std::string verdicts_csv_header();
std::string verdict_csv_row(const std::string& label, const DetectionVerdict& v);

struct ExperimentConfig {
    ModelKind model = ModelKind::F2;
    AttackSpec attack;  // attack.target_zone is attacked, `reference_zone` stays clean
    std::string reference_zone;
    double tau = kDefaultTau;
    std::size_t vote_k = 1;  // k-of-n rule; 1 = any measure
    std::size_t n_trials = 50;
    std::uint64_t seed = 1;
    std::size_t window_length = kDefaultWindowHours;
    std::size_t n_windows = kDefaultCalibrationWindows;
    double split_ratio = 0.7;
    similarity::SimilarityParams params;
};

/// Fitted models, clean forecasts and the clean baseline for one experiment;
/// reusable across attack settings.
struct PreparedExperiment {
    FittedModel target_model;
    FittedModel reference_model;
    ZoneSeries target_zone;
    /// Zone-series positions of the forecast rows shared by both zones.
    std::vector<std::size_t> rows;
    std::vector<double> target_forecast;
    std::vector<double> reference_forecast;
    Baseline baseline;
};

PreparedExperiment prepare_experiment(const ZonalDataset& dataset, const ExperimentConfig& cfg);

struct ExperimentResult {
    std::size_t n_trials = 0;
    double detection_rate = 0.0;        // vote rule on attacked windows
    double false_positive_rate = 0.0;   // vote rule on the same windows without attack
    std::array<double, similarity::kMeasureCount> measure_detection_rate{};
    std::array<double, similarity::kMeasureCount> measure_false_positive_rate{};
    std::array<double, similarity::kMeasureCount> mean_abs_z{};
    double mean_forecast_shift = 0.0;   // MW per attacked hour, averaged over trials
    std::vector<DetectionVerdict> attacked_verdicts;
    std::vector<DetectionVerdict> clean_verdicts;
};

/// Trial i draws a window and an attack seed from derive_seed(cfg.seed, "trial/<i>").
ExperimentResult run_trials(const PreparedExperiment& prepared, const ExperimentConfig& cfg);

ExperimentResult detection_experiment(const ZonalDataset& dataset, const ExperimentConfig& cfg);

std::string experiment_summary_csv(const ExperimentConfig& cfg, const ExperimentResult& r);

}  // namespace stlf
