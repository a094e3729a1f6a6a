#pragma once

#include "stlf/features.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stlf {

struct FitStats {
    double mae = 0.0;  // MW
    double r2 = 0.0;
    double adj_r2 = 0.0;
    std::size_t n = 0;

    friend bool operator==(const FitStats&, const FitStats&) = default;
};

double mean_absolute_error(std::span<const double> y, std::span<const double> y_hat);
/// 1 - SSE/SST; ZeroVariance for constant y.
double r_squared(std::span<const double> y, std::span<const double> y_hat);
/// 1 - (1 - r2)(n - 1)/(n - p - 1); DegenerateDof when n <= p + 1.
double adjusted_r_squared(double r2, std::size_t n, std::size_t p_predictors);

/// mae, r2 and adjusted r2 with p_predictors regressors besides the intercept.
FitStats metrics(std::span<const double> y, std::span<const double> y_hat, std::size_t p_predictors);

inline constexpr double kRankTolerance = 1e-10;

/// Least-squares solution of min ||y - X b|| via Householder QR on
/// unit-norm-scaled columns. Throws RankDeficient when a diagonal entry of R
/// falls below kRankTolerance times the largest one.
std::vector<double> solve_least_squares(std::span<const double> x_row_major, std::size_t rows, std::size_t cols,
                                        std::span<const double> y);

struct FittedModel {
    ModelKind kind = ModelKind::F1;
    DesignOptions options;
    std::vector<std::string> labels;
    std::vector<double> coefficients;
    FitStats train_stats;
    std::optional<FitStats> test_stats;

    std::size_t predictors() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    std::optional<double> coefficient(const std::string& label) const;

    /// key = value text; doubles printed with 17 significant digits.
    std::string serialize() const;
    static FittedModel deserialize(const std::string& text);

    friend bool operator==(const FittedModel&, const FittedModel&) = default;
};

FittedModel fit_ols(const DesignMatrix& x);
/// Fits on train and fills test_stats from the held-out rows. An f2 column that
/// is all zero on the train rows is dropped from the model first.
FittedModel fit_and_evaluate(const DesignMatrix& train, const DesignMatrix& test);

std::vector<double> predict(const FittedModel& model, const DesignMatrix& x);

/// Rebuilds the model's columns from a zone and scores every design row.
std::vector<double> forecast(const FittedModel& model, const ZoneSeries& zone);

}  // namespace stlf
