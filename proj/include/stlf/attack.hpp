#pragma once

#include "stlf/core_data.hpp"
#include "stlf/regress.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stlf {

enum class AttackKind { Gaussian, BoundedOpt };

const char* to_string(AttackKind kind) noexcept;
AttackKind parse_attack_kind(std::string_view text);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Accepts "1", "2", "inf".
double parse_norm_order(std::string_view text);
std::string norm_order_name(double p);

struct AttackSpec {
    AttackKind kind = AttackKind::Gaussian;
    std::string target_zone;
    std::uint64_t seed = 0;
    // Gaussian
    double mean = 0.0;
    double sd = 1.0;
    // Bounded optimization
    double epsilon = 1.0;
    double p = kInfNorm;
    int direction = -1;  // +1 inflate, -1 deflate
    std::size_t max_iters = 200;
    /// 0 means epsilon / 50.
    double step_size = 0.0;

    double effective_step() const noexcept { return step_size > 0.0 ? step_size : epsilon / 50.0; }
    /// Throws InvalidArgument on out-of-domain fields for the chosen kind.
    void validate() const;
};

struct AttackResult {
    TimeSeries perturbed_temperature;
    /// Perturbation per hour of the zone series (zero where not attacked).
    std::vector<double> delta;
    double delta_norm = 0.0;
    /// Attacked minus clean forecast on each design row, MW.
    std::vector<double> forecast_shift;
    std::size_t iterations_used = 0;
    /// ||delta||_p <= epsilon; only meaningful for bounded attacks.
    std::optional<bool> feasible;
    /// gamma * sum of attacked forecast minus the same for the clean forecast.
    double objective_gain = 0.0;

    double total_shift() const;
};

/// T + eta with eta iid Normal(mean, sd^2) drawn as mean + sd * z from a
/// generator seeded with spec.seed, so sd sweeps share one noise path.
TimeSeries inject_gaussian(const TimeSeries& temperature, const AttackSpec& spec);

double lp_norm(std::span<const double> x, double p);

/// Euclidean projection onto {d : ||d||_p <= epsilon}, p in {1, 2, inf}.
/// The returned vector satisfies lp_norm(result, p) <= epsilon in floating point.
std::vector<double> project_lp(std::span<const double> delta, double epsilon, double p);

/// Half-open range of zone-series positions the attacker may touch.
using RowRange = std::pair<std::size_t, std::size_t>;

/// Per-row cubic ydot_t(T) = c0 + c1 T + c2 T^2 + c3 T^3 of a fitted model,
/// the form every f1/f2 row takes once calendar and lag terms are fixed.
class ForecastPolynomial {
public:
    ForecastPolynomial(const FittedModel& model, const ZoneSeries& zone);

    const std::vector<std::size_t>& rows() const noexcept { return rows_; }
    bool depends_on_temperature() const noexcept { return depends_on_t_; }

    /// Forecast at row r (index into rows()) for temperature t.
    double value(std::size_t r, double t) const;
    double derivative(std::size_t r, double t) const;

private:
    std::vector<std::size_t> rows_;
    std::vector<std::array<double, 4>> coef_;
    bool depends_on_t_ = false;
};

/// gamma * sum_t yhat_t(T + delta), delta indexed like the zone series.
/// Rebuilds the design matrix from scratch (reference route).
double attack_objective(const FittedModel& model, const ZoneSeries& zone, std::span<const double> delta,
                        int direction);
/// Analytic d(objective)/d(delta), length of the zone series.
std::vector<double> attack_gradient(const FittedModel& model, const ZoneSeries& zone, std::span<const double> delta,
                                    int direction);

/// Projected gradient ascent of gamma * sum(yhat) over the p-ball of radius
/// epsilon with fixed steps, returning the best iterate seen.
AttackResult optimize_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec,
                             std::optional<RowRange> window = std::nullopt);

/// Applies inject_gaussian and reports the resulting forecast shift.
AttackResult gaussian_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec);

/// Dispatches on spec.kind.
AttackResult run_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec);

/// One-record summary: kind, zone, parameters, delta norm, total MW shift,
/// iterations and feasibility. The header has no trailing newline; rows do.
std::string attack_summary_header();
std::string attack_summary_row(const AttackSpec& spec, const AttackResult& result);

}  // namespace stlf
