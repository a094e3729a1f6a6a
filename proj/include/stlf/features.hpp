#pragma once

#include "stlf/core_data.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stlf {

enum class ModelKind { F1, F2 };

const char* to_string(ModelKind kind) noexcept;
/// Accepts "f1"/"F1"/"f2"/"F2"; throws InvalidArgument otherwise.
ModelKind parse_model_kind(std::string_view text);

// Calendar factors. Level 0 of each factor is the reference level.
enum class Factor { Day, Hour, Month };

/// MON..FRI map to 0..4; Saturday and Sunday share level 5 (WEEKEND).
int day_level(const HourlyTimestamp& ts) noexcept;
bool is_weekend(const HourlyTimestamp& ts) noexcept;
std::string level_name(Factor f, int level);

struct FactorLevel {
    Factor factor;
    int level;

    friend bool operator==(const FactorLevel&, const FactorLevel&) = default;
};

/// A regressor is a product of one-hot indicators, a power of temperature and
/// optionally a lagged load value. The intercept is the empty product.
struct ColumnSpec {
    std::string label;
    std::vector<FactorLevel> indicators;
    int temperature_power = 0;
    int lag_hours = 0;

    bool depends_on_temperature() const noexcept { return temperature_power > 0; }
};

/// What a column needs to know about one hour.
struct RowContext {
    int day = 0;
    int hour = 0;
    int month = 0;  // 0 = January
    double temperature = 0.0;
    std::span<const double> load;  // whole zone load series
    std::size_t index = 0;         // position of this hour in `load`
};

RowContext make_row_context(const ZoneSeries& zone, std::span<const double> temperature, std::size_t index);
double column_value(const ColumnSpec& col, const RowContext& ctx);
/// d(column)/dT at the row.
double column_temperature_derivative(const ColumnSpec& col, const RowContext& ctx);

struct DesignOptions {
    /// Drop Saturday/Sunday rows and use a five-level day factor.
    bool weekday_only = false;

    friend bool operator==(const DesignOptions&, const DesignOptions&) = default;
};

inline constexpr int kLagOneWeek = 168;
inline constexpr int kLagTwoWeeks = 336;

class DesignMatrix {
public:
    ModelKind kind = ModelKind::F1;
    DesignOptions options;
    std::vector<ColumnSpec> columns;
    /// Candidate columns dropped because they were identically zero.
    std::vector<std::string> omitted;
    std::vector<double> values;  // row-major, rows() x cols()
    std::vector<double> target;  // load, MW
    std::vector<HourlyTimestamp> row_timestamps;
    /// Position of each row in the zone series it was built from.
    std::vector<std::size_t> source_rows;

    std::size_t rows() const noexcept { return target.size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }
    std::vector<std::string> labels() const;

    DesignMatrix select_rows(std::span<const std::size_t> rows) const;
    /// "timestamp,<labels>,target" followed by one line per row.
    std::string to_csv() const;
};

/// Every column a model could use, before zero-column omission.
std::vector<ColumnSpec> candidate_columns(ModelKind kind, const DesignOptions& options = {});

/// [1, T, H dummies, D dummies, LL_1w, LL_2w]; the first 336 hours only feed lags.
DesignMatrix build_design_f1(const ZoneSeries& zone, const DesignOptions& options = {});
/// [1, D, H, DxH, MxT^k (all months), HxT^k (non-reference hours)] for k = 1..3.
DesignMatrix build_design_f2(const ZoneSeries& zone, const DesignOptions& options = {});
DesignMatrix build_design(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options = {});

/// Rebuilds exactly the named columns (no omission), e.g. for scoring a fitted
/// model on new inputs. Throws SchemaMismatch on an unknown label.
DesignMatrix build_design_for_columns(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options,
                                      std::span<const std::string> labels);

/// Rows the model of `kind` produces for a series of length n, as positions in the series.
std::vector<std::size_t> design_rows(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options);

/// Random partition with |train| = round(ratio * rows); both halves keep chronological order.
std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& x, double ratio, std::uint64_t seed);

}  // namespace stlf
