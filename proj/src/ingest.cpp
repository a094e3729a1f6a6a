#include "stlf/ingest.hpp"

#include "stlf/error.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>
#include <tuple>

namespace stlf {

namespace {

std::vector<std::string> lines_of(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string read_input(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, "file not found: " + path);
    return text::read_file(path);
}

/// Hour index and minute of "YYYY-MM-DDTHH:MM".
std::pair<std::int64_t, int> parse_reading_time(std::string_view s) {
    if (s.size() != 16) throw Error(ErrorKind::FormatError, "bad timestamp '" + std::string(s) + "'");
    const auto minute = text::parse_int(s.substr(14, 2));
    if (!minute || *minute < 0 || *minute > 59 || s[13] != ':') {
        throw Error(ErrorKind::FormatError, "bad minutes in '" + std::string(s) + "'");
    }
    std::string on_hour(s.substr(0, 14));
    on_hour += "00";
    return {HourlyTimestamp::parse(on_hour).hour_index(), static_cast<int>(*minute)};
}

void finish_report(CleaningReport& report) {
    report.rows_kept = report.rows_read - report.rows_dropped;
}

}  // namespace

void CleaningReport::append(const std::string& stage, const CleaningReport& other, bool count_rows) {
    if (count_rows) {
        rows_read += other.rows_read;
        rows_kept += other.rows_kept;
        rows_dropped += other.rows_dropped;
    }
    rows_interpolated += other.rows_interpolated;
    for (const auto& [name, r] : other.per_series) per_series[stage + ":" + name] = r;
    for (const auto& issue : other.issues) issues.push_back(stage + ": " + issue);
}

std::string CleaningReport::to_csv() const {
    std::ostringstream out;
    out << "series,rows_read,rows_kept,rows_dropped,rows_interpolated\n";
    out << "TOTAL," << rows_read << ',' << rows_kept << ',' << rows_dropped << ',' << rows_interpolated << '\n';
    for (const auto& [name, r] : per_series) {
        out << name << ',' << r.rows_read << ',' << r.rows_kept << ',' << r.rows_dropped << ','
            << r.rows_interpolated << '\n';
    }
    return out.str();
}

ParsedSeries parse_load_text(const std::string& content) {
    const auto lines = lines_of(content);
    std::size_t first = 0;
    while (first < lines.size() && text::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw Error(ErrorKind::NoData, "load file is empty");

    const auto header = text::split(lines[first]);
    if (header.size() < 2 || header[0] != "timestamp") {
        throw Error(ErrorKind::FormatError, "load header must be 'timestamp,<zone>,...'");
    }
    std::vector<std::string> zones;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].empty()) throw Error(ErrorKind::FormatError, "empty zone name in load header");
        zones.emplace_back(header[i]);
    }
    if (std::set<std::string>(zones.begin(), zones.end()).size() != zones.size()) {
        throw Error(ErrorKind::FormatError, "duplicate zone in load header");
    }

    ParsedSeries out;
    // hour index -> values; a later row for the same hour replaces the earlier one.
    std::map<std::int64_t, std::vector<double>> rows;
    for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
        if (text::trim(lines[ln]).empty()) continue;
        ++out.report.rows_read;
        const auto fields = text::split(lines[ln]);
        const std::string where = "line " + std::to_string(ln + 1);
        if (fields.size() != header.size()) {
            ++out.report.rows_dropped;
            out.report.issues.push_back(where + ": expected " + std::to_string(header.size()) + " fields");
            continue;
        }
        std::int64_t hour = 0;
        try {
            hour = HourlyTimestamp::parse(fields[0]).hour_index();
        } catch (const Error& e) {
            ++out.report.rows_dropped;
            out.report.issues.push_back(where + ": " + e.what());
            continue;
        }
        std::vector<double> values;
        bool ok = true;
        for (std::size_t i = 1; i < fields.size() && ok; ++i) {
            const auto v = text::parse_double(fields[i]);
            if (!v) {
                ok = false;
                out.report.issues.push_back(where + ": unparsable value '" + std::string(fields[i]) + "' for zone " +
                                            zones[i - 1]);
            } else {
                values.push_back(*v);
            }
        }
        if (!ok) {
            ++out.report.rows_dropped;
            continue;
        }
        if (rows.contains(hour)) {
            ++out.report.rows_dropped;
            out.report.issues.push_back(where + ": duplicate timestamp replaces an earlier row");
        }
        rows[hour] = std::move(values);
    }
    finish_report(out.report);
    if (rows.empty()) throw Error(ErrorKind::NoData, "load file has no valid rows");

    for (std::size_t z = 0; z < zones.size(); ++z) {
        GappedSeries s;
        s.unit = Unit::MW;
        for (const auto& [hour, values] : rows) s.points.emplace_back(hour, values[z]);
        out.series.emplace(zones[z], std::move(s));
        SeriesReport r;
        r.rows_read = out.report.rows_read;
        r.rows_dropped = out.report.rows_dropped;
        r.rows_kept = out.report.rows_kept;
        out.report.per_series[zones[z]] = r;
    }
    return out;
}

ParsedSeries parse_load_file(const std::string& path) { return parse_load_text(read_input(path)); }

ParsedSeries parse_temperature_text(const std::string& content) {
    const auto lines = lines_of(content);
    std::size_t first = 0;
    while (first < lines.size() && text::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw Error(ErrorKind::NoData, "temperature file is empty");

    const auto header = text::split(lines[first]);
    if (header.size() != 3 || header[0] != "timestamp" || header[1] != "station" || header[2] != "temp_f") {
        throw Error(ErrorKind::FormatError, "temperature header must be 'timestamp,station,temp_f'");
    }

    ParsedSeries out;
    // (station, hour, minute) -> reading; later rows overwrite earlier ones.
    std::map<std::tuple<std::string, std::int64_t, int>, double> readings;
    std::map<std::string, SeriesReport> per_station;
    const auto drop = [&](const std::string& station, const std::string& issue) {
        ++out.report.rows_dropped;
        if (!station.empty()) ++per_station[station].rows_dropped;
        out.report.issues.push_back(issue);
    };

    for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
        if (text::trim(lines[ln]).empty()) continue;
        ++out.report.rows_read;
        const auto fields = text::split(lines[ln]);
        const std::string where = "line " + std::to_string(ln + 1);
        if (fields.size() != 3 || fields[1].empty()) {
            drop("", where + ": expected 'timestamp,station,temp_f'");
            continue;
        }
        const std::string station(fields[1]);
        ++per_station[station].rows_read;
        std::pair<std::int64_t, int> when;
        try {
            when = parse_reading_time(fields[0]);
        } catch (const Error& e) {
            drop(station, where + ": " + e.what());
            continue;
        }
        const auto temp = text::parse_double(fields[2]);
        if (!temp) {
            drop(station, where + ": unparsable temperature '" + std::string(fields[2]) + "'");
            continue;
        }
        if (*temp < kMinPlausibleTempF || *temp > kMaxPlausibleTempF) {
            drop(station, where + ": temperature " + std::string(fields[2]) + " outside plausible range");
            continue;
        }
        const auto key = std::make_tuple(station, when.first, when.second);
        if (readings.contains(key)) drop(station, where + ": duplicate reading replaces an earlier row");
        readings[key] = *temp;
    }
    finish_report(out.report);
    if (readings.empty()) throw Error(ErrorKind::NoData, "temperature file has no valid rows");

    // Hourly means; map order groups by station, then hour, then minute.
    std::string station;
    std::int64_t hour = 0;
    double sum = 0.0;
    int count = 0;
    const auto flush = [&] {
        if (count > 0) out.series[station].points.emplace_back(hour, sum / count);
    };
    for (const auto& [key, value] : readings) {
        const auto& [st, h, minute] = key;
        if (count > 0 && (st != station || h != hour)) {
            flush();
            count = 0;
            sum = 0.0;
        }
        station = st;
        hour = h;
        sum += value;
        ++count;
    }
    flush();
    for (auto& [name, s] : out.series) s.unit = Unit::DegF;
    for (auto& [name, r] : per_station) {
        r.rows_kept = r.rows_read - r.rows_dropped;
        out.report.per_series[name] = r;
    }
    return out;
}

ParsedSeries parse_temperature_file(const std::string& path) { return parse_temperature_text(read_input(path)); }

CleanResult clean(const GappedSeries& input, const CleanOptions& options, const std::string& name) {
    const auto& pts = input.points;
    if (pts.empty()) throw Error(ErrorKind::NoData, name + " has no points");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].first <= pts[i - 1].first) {
            throw Error(ErrorKind::InvalidSeries, name + " timestamps are not strictly increasing");
        }
    }

    // Split into runs joined by fillable gaps; keep the longest (earliest on ties).
    struct Segment {
        std::size_t first_point;
        std::size_t last_point;
        std::int64_t hours;
    };
    std::vector<Segment> segments;
    Segment cur{0, 0, 1};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const std::int64_t missing = pts[i].first - pts[i - 1].first - 1;
        if (missing > static_cast<std::int64_t>(options.max_interpolated_gap)) {
            segments.push_back(cur);
            cur = {i, i, 1};
        } else {
            cur.last_point = i;
            cur.hours += missing + 1;
        }
    }
    segments.push_back(cur);
    const Segment best = *std::max_element(segments.begin(), segments.end(),
                                           [](const Segment& a, const Segment& b) { return a.hours < b.hours; });

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(best.hours));
    std::size_t interpolated = 0;
    values.push_back(pts[best.first_point].second);
    for (std::size_t i = best.first_point + 1; i <= best.last_point; ++i) {
        const auto [h0, v0] = pts[i - 1];
        const auto [h1, v1] = pts[i];
        const auto span = static_cast<double>(h1 - h0);
        for (std::int64_t h = h0 + 1; h < h1; ++h) {
            values.push_back(v0 + (v1 - v0) * static_cast<double>(h - h0) / span);
            ++interpolated;
        }
        values.push_back(v1);
    }

    if (options.min_length > 0 && values.size() < options.min_length) {
        throw Error(ErrorKind::TooShort, name + ": longest clean segment has " + std::to_string(values.size()) +
                                             " hours, need " + std::to_string(options.min_length));
    }

    CleanResult out{TimeSeries(input.unit, HourlyTimestamp::from_hour_index(pts[best.first_point].first),
                               std::move(values)),
                    {}};
    auto& rep = out.report;
    rep.rows_read = pts.size();
    rep.rows_kept = best.last_point - best.first_point + 1;
    rep.rows_dropped = rep.rows_read - rep.rows_kept;
    rep.rows_interpolated = interpolated;
    rep.per_series[name] = {rep.rows_read, rep.rows_kept, rep.rows_dropped, rep.rows_interpolated};
    if (segments.size() > 1) {
        rep.issues.push_back(name + ": " + std::to_string(segments.size()) + " segments after gap filling; kept " +
                             std::to_string(out.series.size()) + " hours starting " +
                             out.series.start().to_string());
    }
    return out;
}

ZonalDataset assemble_dataset(const std::map<std::string, TimeSeries>& loads,
                              const std::map<std::string, TimeSeries>& temperatures) {
    if (loads.empty()) throw Error(ErrorKind::NoData, "no load zones");
    std::vector<TimeSeries> all;
    std::vector<std::string> ids;
    for (const auto& [zone, load] : loads) {
        auto it = temperatures.find(zone);
        if (it == temperatures.end()) {
            throw Error(ErrorKind::InvalidArgument, "no temperature station named '" + zone + "'");
        }
        ids.push_back(zone);
        all.push_back(load);
        all.push_back(it->second);
    }
    const auto aligned = align(all);
    std::map<std::string, ZoneSeries> zones;
    for (std::size_t i = 0; i < ids.size(); ++i) zones[ids[i]] = {aligned[2 * i], aligned[2 * i + 1]};
    return ZonalDataset(std::move(zones));
}

IngestResult ingest_files(const std::string& load_path, const std::string& temperature_path,
                          const CleanOptions& options) {
    IngestResult out;
    auto loads = parse_load_file(load_path);
    auto temps = parse_temperature_file(temperature_path);
    out.report.append("load", loads.report);
    out.report.append("temperature", temps.report);

    std::map<std::string, TimeSeries> load_series;
    std::map<std::string, TimeSeries> temp_series;
    for (const auto& [zone, s] : loads.series) {
        auto r = clean(s, options, zone);
        out.report.append("clean-load", r.report, false);
        load_series.emplace(zone, std::move(r.series));
    }
    for (const auto& [station, s] : temps.series) {
        if (!loads.series.contains(station)) {
            out.report.issues.push_back("temperature station '" + station + "' has no load zone; ignored");
            continue;
        }
        auto r = clean(s, options, station);
        out.report.append("clean-temperature", r.report, false);
        temp_series.emplace(station, std::move(r.series));
    }
    out.dataset = assemble_dataset(load_series, temp_series);
    return out;
}

std::string format_load_file(const ZonalDataset& dataset) {
    std::ostringstream out;
    out << "timestamp";
    for (const auto& [zone, _] : dataset.zones()) out << ',' << zone;
    out << '\n';
    const std::size_t n = dataset.hours();
    for (std::size_t i = 0; i < n; ++i) {
        out << dataset.start().plus_hours(static_cast<std::int64_t>(i)).to_string();
        for (const auto& [zone, z] : dataset.zones()) out << ',' << text::format_exact(z.load[i]);
        out << '\n';
    }
    return out.str();
}

std::string format_temperature_file(const std::map<std::string, TimeSeries>& stations) {
    std::ostringstream out;
    out << "timestamp,station,temp_f\n";
    if (stations.empty()) return out.str();
    // Interleaved by hour, stations in name order within each hour.
    std::int64_t lo = stations.begin()->second.start_index();
    std::int64_t hi = stations.begin()->second.end_index();
    for (const auto& [_, s] : stations) {
        lo = std::min(lo, s.start_index());
        hi = std::max(hi, s.end_index());
    }
    for (std::int64_t h = lo; h < hi; ++h) {
        const std::string ts = HourlyTimestamp::from_hour_index(h).to_string();
        for (const auto& [station, s] : stations) {
            if (h < s.start_index() || h >= s.end_index()) continue;
            out << ts << ',' << station << ',' << text::format_exact(s[static_cast<std::size_t>(h - s.start_index())])
                << '\n';
        }
    }
    return out.str();
}

std::string format_temperature_file(const ZonalDataset& dataset) {
    std::map<std::string, TimeSeries> stations;
    for (const auto& [zone, z] : dataset.zones()) stations.emplace(zone, z.temperature);
    return format_temperature_file(stations);
}

ZonalDataset read_dataset(const std::string& load_path, const std::string& temperature_path) {
    return ingest_files(load_path, temperature_path).dataset;
}

}  // namespace stlf
