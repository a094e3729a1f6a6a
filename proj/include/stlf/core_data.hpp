#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stlf {

/// Calendar hour on a fixed-offset clock (no DST). Ordered chronologically.
class HourlyTimestamp {
public:
    HourlyTimestamp() = default;  // 1970-01-01T00:00
    HourlyTimestamp(int year, int month, int day, int hour);

    /// Hours elapsed since 1970-01-01T00:00.
    static HourlyTimestamp from_hour_index(std::int64_t index);
    /// Accepts "YYYY-MM-DDTHH:00" (a space is accepted in place of 'T').
    static HourlyTimestamp parse(std::string_view text);

    int year() const noexcept { return year_; }
    int month() const noexcept { return month_; }
    int day() const noexcept { return day_; }
    int hour() const noexcept { return hour_; }

    std::int64_t hour_index() const noexcept;
    /// 0 = Monday ... 6 = Sunday.
    int weekday() const noexcept;
    std::string to_string() const;

    HourlyTimestamp plus_hours(std::int64_t hours) const { return from_hour_index(hour_index() + hours); }

    friend std::strong_ordering operator<=>(const HourlyTimestamp& a, const HourlyTimestamp& b) noexcept {
        return a.hour_index() <=> b.hour_index();
    }
    friend bool operator==(const HourlyTimestamp& a, const HourlyTimestamp& b) noexcept {
        return a.hour_index() == b.hour_index();
    }

private:
    int year_ = 1970;
    int month_ = 1;
    int day_ = 1;
    int hour_ = 0;
};

enum class Unit { MW, DegF, Dimensionless };

const char* to_string(Unit unit) noexcept;

/// Contiguous hourly series: a start hour plus one finite value per hour.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(Unit unit, HourlyTimestamp start, std::vector<double> values);

    Unit unit() const noexcept { return unit_; }
    HourlyTimestamp start() const noexcept { return start_; }
    /// One past the last covered hour.
    HourlyTimestamp end() const { return start_.plus_hours(static_cast<std::int64_t>(values_.size())); }
    std::int64_t start_index() const noexcept { return start_.hour_index(); }
    std::int64_t end_index() const noexcept { return start_index() + static_cast<std::int64_t>(values_.size()); }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    HourlyTimestamp timestamp(std::size_t i) const { return start_.plus_hours(static_cast<std::int64_t>(i)); }

    TimeSeries slice(std::size_t offset, std::size_t count) const;
    /// Same index and unit, new values.
    TimeSeries with_values(std::vector<double> values) const;
    TimeSeries with_values(std::vector<double> values, Unit unit) const;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    Unit unit_ = Unit::Dimensionless;
    HourlyTimestamp start_{};
    std::vector<double> values_;
};

struct ZoneSeries {
    TimeSeries load;         // MW
    TimeSeries temperature;  // DEG_F

    friend bool operator==(const ZoneSeries&, const ZoneSeries&) = default;
};

/// Per-zone load and temperature on one shared hourly index.
class ZonalDataset {
public:
    ZonalDataset() = default;
    explicit ZonalDataset(std::map<std::string, ZoneSeries> zones);

    const std::map<std::string, ZoneSeries>& zones() const noexcept { return zones_; }
    const ZoneSeries& zone(const std::string& id) const;
    bool has_zone(const std::string& id) const { return zones_.contains(id); }
    std::vector<std::string> zone_ids() const;

    HourlyTimestamp start() const;
    std::size_t hours() const;

    /// Throws InsufficientData unless the dataset holds at least two zones.
    void require_pairwise() const;

    friend bool operator==(const ZonalDataset&, const ZonalDataset&) = default;

private:
    std::map<std::string, ZoneSeries> zones_;
};

/// Restricts every series to the maximal common hour range.
std::vector<TimeSeries> align(std::span<const TimeSeries> series);

/// (mean, sample standard deviation with N-1 denominator).
std::pair<double, double> sample_mean_sd(std::span<const double> x);
std::pair<double, double> sample_mean_sd(const TimeSeries& x);

inline constexpr double kZeroVarianceThreshold = 1e-12;

std::vector<double> znormalize(std::span<const double> x);
TimeSeries znormalize(const TimeSeries& x);

}  // namespace stlf
