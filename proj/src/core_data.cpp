#include "stlf/core_data.hpp"

#include "stlf/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace stlf {

namespace {

std::chrono::sys_days to_days(int y, int m, int d) {
    using namespace std::chrono;
    return sys_days{year{y} / month{static_cast<unsigned>(m)} / day{static_cast<unsigned>(d)}};
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width) {
    if (pos + width > text.size()) {
        throw Error(ErrorKind::FormatError, "timestamp too short: '" + std::string(text) + "'");
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') {
            throw Error(ErrorKind::FormatError, "bad timestamp: '" + std::string(text) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace

HourlyTimestamp::HourlyTimestamp(int year, int month, int day, int hour)
    : year_(year), month_(month), day_(day), hour_(hour) {
    using namespace std::chrono;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 0 || hour > 23) {
        throw Error(ErrorKind::InvalidArgument, "timestamp field out of range");
    }
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::InvalidArgument, "not a calendar date");
    }
}

HourlyTimestamp HourlyTimestamp::from_hour_index(std::int64_t index) {
    using namespace std::chrono;
    std::int64_t days = index >= 0 ? index / 24 : -((-index + 23) / 24);
    const int hour = static_cast<int>(index - days * 24);
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return HourlyTimestamp(static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
                           static_cast<int>(static_cast<unsigned>(ymd.day())), hour);
}

HourlyTimestamp HourlyTimestamp::parse(std::string_view text) {
    // YYYY-MM-DDTHH:00
    if (text.size() != 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':') {
        throw Error(ErrorKind::FormatError, "expected YYYY-MM-DDTHH:00, got '" + std::string(text) + "'");
    }
    if (parse_fixed(text, 14, 2) != 0) {
        throw Error(ErrorKind::FormatError, "timestamp is not on the hour: '" + std::string(text) + "'");
    }
    try {
        return HourlyTimestamp(parse_fixed(text, 0, 4), parse_fixed(text, 5, 2), parse_fixed(text, 8, 2),
                               parse_fixed(text, 11, 2));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FormatError) throw;
        throw Error(ErrorKind::FormatError, "invalid timestamp '" + std::string(text) + "'");
    }
}

std::int64_t HourlyTimestamp::hour_index() const noexcept {
    return static_cast<std::int64_t>(to_days(year_, month_, day_).time_since_epoch().count()) * 24 + hour_;
}

int HourlyTimestamp::weekday() const noexcept {
    const std::chrono::weekday wd{to_days(year_, month_, day_)};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

std::string HourlyTimestamp::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00", year_, month_, day_, hour_);
    return buf;
}

const char* to_string(Unit unit) noexcept {
    switch (unit) {
        case Unit::MW: return "MW";
        case Unit::DegF: return "DEG_F";
        case Unit::Dimensionless: return "DIMENSIONLESS";
    }
    return "?";
}

TimeSeries::TimeSeries(Unit unit, HourlyTimestamp start, std::vector<double> values)
    : unit_(unit), start_(start), values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvalidSeries, "non-finite value at position " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > values_.size()) {
        throw Error(ErrorKind::InvalidArgument, "slice out of range");
    }
    return TimeSeries(unit_, timestamp(offset),
                      std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                                          values_.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const { return with_values(std::move(values), unit_); }

TimeSeries TimeSeries::with_values(std::vector<double> values, Unit unit) const {
    if (values.size() != values_.size()) {
        throw Error(ErrorKind::LengthMismatch, "replacement values differ in length");
    }
    return TimeSeries(unit, start_, std::move(values));
}

ZonalDataset::ZonalDataset(std::map<std::string, ZoneSeries> zones) : zones_(std::move(zones)) {
    if (zones_.empty()) {
        throw Error(ErrorKind::NoData, "dataset has no zones");
    }
    const auto& first = zones_.begin()->second.load;
    for (const auto& [id, z] : zones_) {
        for (const TimeSeries* s : {&z.load, &z.temperature}) {
            if (s->start() != first.start() || s->size() != first.size()) {
                throw Error(ErrorKind::InvalidSeries, "zone " + id + " does not cover the shared index");
            }
        }
        if (z.load.unit() != Unit::MW || z.temperature.unit() != Unit::DegF) {
            throw Error(ErrorKind::InvalidSeries, "zone " + id + " has wrong units");
        }
    }
}

const ZoneSeries& ZonalDataset::zone(const std::string& id) const {
    auto it = zones_.find(id);
    if (it == zones_.end()) {
        throw Error(ErrorKind::InvalidArgument, "unknown zone '" + id + "'");
    }
    return it->second;
}

std::vector<std::string> ZonalDataset::zone_ids() const {
    std::vector<std::string> ids;
    for (const auto& [id, _] : zones_) ids.push_back(id);
    return ids;
}

HourlyTimestamp ZonalDataset::start() const {
    return zones_.empty() ? HourlyTimestamp{} : zones_.begin()->second.load.start();
}

std::size_t ZonalDataset::hours() const { return zones_.empty() ? 0 : zones_.begin()->second.load.size(); }

void ZonalDataset::require_pairwise() const {
    if (zones_.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "pairwise similarity requires at least 2 zones");
    }
}

std::vector<TimeSeries> align(std::span<const TimeSeries> series) {
    if (series.empty()) return {};
    std::int64_t lo = series.front().start_index();
    std::int64_t hi = series.front().end_index();
    for (const auto& s : series) {
        lo = std::max(lo, s.start_index());
        hi = std::min(hi, s.end_index());
    }
    if (hi <= lo) {
        throw Error(ErrorKind::EmptyIntersection, "series share no common timestamps");
    }
    std::vector<TimeSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) {
        out.push_back(s.slice(static_cast<std::size_t>(lo - s.start_index()), static_cast<std::size_t>(hi - lo)));
    }
    return out;
}

std::pair<double, double> sample_mean_sd(std::span<const double> x) {
    if (x.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "sample statistics need at least 2 points");
    }
    // constant input gives exactly (x, 0) rather than rounding residue
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return {x.front(), 0.0};
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

std::pair<double, double> sample_mean_sd(const TimeSeries& x) { return sample_mean_sd(x.values()); }

std::vector<double> znormalize(std::span<const double> x) {
    const auto [mean, sd] = sample_mean_sd(x);
    if (sd < kZeroVarianceThreshold) {
        throw Error(ErrorKind::ZeroVariance, "cannot z-normalize a constant series");
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
    return out;
}

TimeSeries znormalize(const TimeSeries& x) {
    return x.with_values(znormalize(x.values()), Unit::Dimensionless);
}

}  // namespace stlf
