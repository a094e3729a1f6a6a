#include "stlf/features.hpp"

#include "stlf/error.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace stlf {

namespace {

constexpr std::array<const char*, 6> kDayNames{"MON", "TUE", "WED", "THU", "FRI", "WEEKEND"};
constexpr std::array<const char*, 12> kMonthNames{"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
                                                  "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};

int day_levels(const DesignOptions& options) { return options.weekday_only ? 5 : 6; }

std::string power_suffix(int power) { return power == 1 ? ":T" : ":T^" + std::to_string(power); }

ColumnSpec indicator_column(Factor f, int level) { return {level_name(f, level), {{f, level}}, 0, 0}; }

int factor_value(const RowContext& ctx, Factor f) {
    switch (f) {
        case Factor::Day: return ctx.day;
        case Factor::Hour: return ctx.hour;
        case Factor::Month: return ctx.month;
    }
    return -1;
}

DesignMatrix assemble(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options,
                      std::vector<ColumnSpec> columns, bool omit_zero_columns) {
    DesignMatrix x;
    x.kind = kind;
    x.options = options;
    x.source_rows = design_rows(kind, zone, options);
    if (x.source_rows.empty()) {
        throw Error(ErrorKind::TooShort, "no rows available for the design matrix");
    }

    const std::size_t n_rows = x.source_rows.size();
    const std::size_t n_cols = columns.size();
    std::vector<double> full(n_rows * n_cols);
    const auto temperature = zone.temperature.values();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n_rows); ++r) {
        const auto ctx = make_row_context(zone, temperature, x.source_rows[static_cast<std::size_t>(r)]);
        double* out = full.data() + static_cast<std::size_t>(r) * n_cols;
        for (std::size_t c = 0; c < n_cols; ++c) out[c] = column_value(columns[c], ctx);
    }

    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < n_cols; ++c) {
        bool nonzero = !omit_zero_columns;
        for (std::size_t r = 0; r < n_rows && !nonzero; ++r) nonzero = full[r * n_cols + c] != 0.0;
        if (nonzero) {
            keep.push_back(c);
        } else {
            x.omitted.push_back(columns[c].label);
        }
    }

    x.columns.reserve(keep.size());
    for (std::size_t c : keep) x.columns.push_back(columns[c]);
    if (keep.size() == n_cols) {
        x.values = std::move(full);
    } else {
        x.values.resize(n_rows * keep.size());
        for (std::size_t r = 0; r < n_rows; ++r) {
            for (std::size_t k = 0; k < keep.size(); ++k) x.values[r * keep.size() + k] = full[r * n_cols + keep[k]];
        }
    }

    x.target.reserve(n_rows);
    x.row_timestamps.reserve(n_rows);
    for (std::size_t i : x.source_rows) {
        x.target.push_back(zone.load[i]);
        x.row_timestamps.push_back(zone.load.timestamp(i));
    }
    return x;
}

}  // namespace

const char* to_string(ModelKind kind) noexcept { return kind == ModelKind::F1 ? "f1" : "f2"; }

ModelKind parse_model_kind(std::string_view text) {
    if (text == "f1" || text == "F1") return ModelKind::F1;
    if (text == "f2" || text == "F2") return ModelKind::F2;
    throw Error(ErrorKind::InvalidArgument, "model kind must be f1 or f2, got '" + std::string(text) + "'");
}

int day_level(const HourlyTimestamp& ts) noexcept { return std::min(ts.weekday(), 5); }

bool is_weekend(const HourlyTimestamp& ts) noexcept { return ts.weekday() >= 5; }

std::string level_name(Factor f, int level) {
    char buf[16];
    switch (f) {
        case Factor::Day: return std::string("D[") + kDayNames.at(static_cast<std::size_t>(level)) + "]";
        case Factor::Hour: std::snprintf(buf, sizeof buf, "H[%02d]", level); return buf;
        case Factor::Month: return std::string("M[") + kMonthNames.at(static_cast<std::size_t>(level)) + "]";
    }
    return "?";
}

RowContext make_row_context(const ZoneSeries& zone, std::span<const double> temperature, std::size_t index) {
    const HourlyTimestamp ts = zone.load.timestamp(index);
    RowContext ctx;
    ctx.day = day_level(ts);
    ctx.hour = ts.hour();
    ctx.month = ts.month() - 1;
    ctx.temperature = temperature[index];
    ctx.load = zone.load.values();
    ctx.index = index;
    return ctx;
}

double column_value(const ColumnSpec& col, const RowContext& ctx) {
    for (const auto& ind : col.indicators) {
        if (factor_value(ctx, ind.factor) != ind.level) return 0.0;
    }
    double v = 1.0;
    for (int k = 0; k < col.temperature_power; ++k) v *= ctx.temperature;
    if (col.lag_hours > 0) v *= ctx.load[ctx.index - static_cast<std::size_t>(col.lag_hours)];
    return v;
}

double column_temperature_derivative(const ColumnSpec& col, const RowContext& ctx) {
    if (col.temperature_power == 0) return 0.0;
    for (const auto& ind : col.indicators) {
        if (factor_value(ctx, ind.factor) != ind.level) return 0.0;
    }
    double v = static_cast<double>(col.temperature_power);
    for (int k = 1; k < col.temperature_power; ++k) v *= ctx.temperature;
    if (col.lag_hours > 0) v *= ctx.load[ctx.index - static_cast<std::size_t>(col.lag_hours)];
    return v;
}

std::vector<std::string> DesignMatrix::labels() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.label);
    return out;
}

DesignMatrix DesignMatrix::select_rows(std::span<const std::size_t> rows_to_keep) const {
    DesignMatrix out;
    out.kind = kind;
    out.options = options;
    out.columns = columns;
    out.omitted = omitted;
    out.values.reserve(rows_to_keep.size() * cols());
    for (std::size_t r : rows_to_keep) {
        if (r >= rows()) throw Error(ErrorKind::InvalidArgument, "row index out of range");
        const auto src = row(r);
        out.values.insert(out.values.end(), src.begin(), src.end());
        out.target.push_back(target[r]);
        out.row_timestamps.push_back(row_timestamps[r]);
        out.source_rows.push_back(source_rows[r]);
    }
    return out;
}

std::string DesignMatrix::to_csv() const {
    std::ostringstream out;
    out << "timestamp";
    for (const auto& c : columns) out << ',' << c.label;
    out << ",target\n";
    for (std::size_t r = 0; r < rows(); ++r) {
        out << row_timestamps[r].to_string();
        for (double v : row(r)) out << ',' << text::format_exact(v);
        out << ',' << text::format_exact(target[r]) << '\n';
    }
    return out.str();
}

std::vector<ColumnSpec> candidate_columns(ModelKind kind, const DesignOptions& options) {
    std::vector<ColumnSpec> cols;
    cols.push_back({"(Intercept)", {}, 0, 0});
    const int n_days = day_levels(options);

    if (kind == ModelKind::F1) {
        cols.push_back({"T", {}, 1, 0});
        for (int h = 1; h < 24; ++h) cols.push_back(indicator_column(Factor::Hour, h));
        for (int d = 1; d < n_days; ++d) cols.push_back(indicator_column(Factor::Day, d));
        cols.push_back({"LL_1w", {}, 0, kLagOneWeek});
        cols.push_back({"LL_2w", {}, 0, kLagTwoWeeks});
        return cols;
    }

    // D x H: main effects plus cross products of non-reference levels.
    for (int d = 1; d < n_days; ++d) cols.push_back(indicator_column(Factor::Day, d));
    for (int h = 1; h < 24; ++h) cols.push_back(indicator_column(Factor::Hour, h));
    for (int d = 1; d < n_days; ++d) {
        for (int h = 1; h < 24; ++h) {
            cols.push_back({level_name(Factor::Day, d) + ":" + level_name(Factor::Hour, h),
                            {{Factor::Day, d}, {Factor::Hour, h}},
                            0,
                            0});
        }
    }
    // Temperature enters only through these interactions. Using every month
    // level carries the temperature main effect; hours drop their reference
    // level so the two blocks are not collinear.
    for (int power = 1; power <= 3; ++power) {
        for (int m = 0; m < 12; ++m) {
            cols.push_back({level_name(Factor::Month, m) + power_suffix(power), {{Factor::Month, m}}, power, 0});
        }
    }
    for (int power = 1; power <= 3; ++power) {
        for (int h = 1; h < 24; ++h) {
            cols.push_back({level_name(Factor::Hour, h) + power_suffix(power), {{Factor::Hour, h}}, power, 0});
        }
    }
    return cols;
}

std::vector<std::size_t> design_rows(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options) {
    const std::size_t n = zone.load.size();
    if (zone.temperature.size() != n || zone.temperature.start() != zone.load.start()) {
        throw Error(ErrorKind::InvalidSeries, "load and temperature are not aligned");
    }
    const std::size_t first = kind == ModelKind::F1 ? static_cast<std::size_t>(kLagTwoWeeks) : 0;
    if (kind == ModelKind::F1 && n < first + 1) {
        throw Error(ErrorKind::TooShort, "f1 needs at least " + std::to_string(first + 1) + " hours, got " +
                                             std::to_string(n));
    }
    std::vector<std::size_t> rows;
    rows.reserve(n - std::min(n, first));
    for (std::size_t i = first; i < n; ++i) {
        if (options.weekday_only && is_weekend(zone.load.timestamp(i))) continue;
        rows.push_back(i);
    }
    return rows;
}

DesignMatrix build_design_f1(const ZoneSeries& zone, const DesignOptions& options) {
    // f1 keeps its fixed 31-column layout; a level missing from a short window
    // shows up as RankDeficient when fitting.
    return assemble(ModelKind::F1, zone, options, candidate_columns(ModelKind::F1, options), false);
}

DesignMatrix build_design_f2(const ZoneSeries& zone, const DesignOptions& options) {
    auto x = assemble(ModelKind::F2, zone, options, candidate_columns(ModelKind::F2, options), true);
    if (x.rows() < x.cols()) {
        throw Error(ErrorKind::TooShort, "f2 has " + std::to_string(x.cols()) + " columns but only " +
                                             std::to_string(x.rows()) + " rows");
    }
    return x;
}

DesignMatrix build_design(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options) {
    return kind == ModelKind::F1 ? build_design_f1(zone, options) : build_design_f2(zone, options);
}

DesignMatrix build_design_for_columns(ModelKind kind, const ZoneSeries& zone, const DesignOptions& options,
                                      std::span<const std::string> labels) {
    const auto candidates = candidate_columns(kind, options);
    std::unordered_map<std::string, const ColumnSpec*> by_label;
    for (const auto& c : candidates) by_label.emplace(c.label, &c);
    std::vector<ColumnSpec> cols;
    cols.reserve(labels.size());
    for (const auto& l : labels) {
        auto it = by_label.find(l);
        if (it == by_label.end()) {
            throw Error(ErrorKind::SchemaMismatch, "column '" + l + "' is not a " + to_string(kind) + " regressor");
        }
        cols.push_back(*it->second);
    }
    return assemble(kind, zone, options, std::move(cols), false);
}

std::pair<DesignMatrix, DesignMatrix> train_test_split(const DesignMatrix& x, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::InvalidArgument, "split ratio must be in (0, 1)");
    const std::size_t n = x.rows();
    const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw Error(ErrorKind::DegenerateSplit, "ratio " + text::format_sig(ratio) + " on " + std::to_string(n) +
                                                    " rows leaves one side empty");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {x.select_rows(train), x.select_rows(test)};
}

}  // namespace stlf
