#pragma once

#include "stlf/core_data.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace stlf {

struct SeriesReport {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_dropped = 0;
    std::size_t rows_interpolated = 0;

    friend bool operator==(const SeriesReport&, const SeriesReport&) = default;
};

/// Row accounting for parsing and cleaning. rows_read == rows_kept + rows_dropped
/// holds for the totals and for every per-series entry.
struct CleaningReport {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_dropped = 0;
    std::size_t rows_interpolated = 0;
    std::map<std::string, SeriesReport> per_series;
    std::vector<std::string> issues;

    /// Adds another stage's per-series entries and issues under a "<stage>:"
    /// prefix. Row totals are added only when count_rows is set, so totals can
    /// stay in units of file rows while later stages add detail.
    void append(const std::string& stage, const CleaningReport& other, bool count_rows = true);
    std::string to_csv() const;
};

/// Hourly points with possible gaps; hour indices strictly increasing.
struct GappedSeries {
    Unit unit = Unit::Dimensionless;
    std::vector<std::pair<std::int64_t, double>> points;
};

struct ParsedSeries {
    std::map<std::string, GappedSeries> series;
    CleaningReport report;
};

inline constexpr double kMinPlausibleTempF = -60.0;
inline constexpr double kMaxPlausibleTempF = 140.0;

/// `timestamp,<zone1>,<zone2>,...`; a row with any unparsable field is dropped.
ParsedSeries parse_load_text(const std::string& content);
ParsedSeries parse_load_file(const std::string& path);

/// `timestamp,station,temp_f`, stations interleaved, readings possibly
/// sub-hourly (`YYYY-MM-DDTHH:MM`). Exact duplicates keep the last reading,
/// out-of-range temperatures are dropped, the rest are averaged per hour.
ParsedSeries parse_temperature_text(const std::string& content);
ParsedSeries parse_temperature_file(const std::string& path);

struct CleanOptions {
    std::size_t max_interpolated_gap = 6;  // hours
    /// Minimum length of the returned segment (0 = no requirement).
    std::size_t min_length = 0;
};

struct CleanResult {
    TimeSeries series;
    CleaningReport report;
};

/// Fills gaps of up to max_interpolated_gap hours linearly and returns the
/// longest contiguous segment.
CleanResult clean(const GappedSeries& input, const CleanOptions& options = {}, const std::string& name = "series");

/// Pairs load zones with same-named temperature stations and aligns them.
ZonalDataset assemble_dataset(const std::map<std::string, TimeSeries>& loads,
                              const std::map<std::string, TimeSeries>& temperatures);

struct IngestResult {
    ZonalDataset dataset;
    CleaningReport report;
};

/// Parse, clean and align a load file and a temperature file.
IngestResult ingest_files(const std::string& load_path, const std::string& temperature_path,
                          const CleanOptions& options = {});

std::string format_load_file(const ZonalDataset& dataset);
std::string format_temperature_file(const ZonalDataset& dataset);
std::string format_temperature_file(const std::map<std::string, TimeSeries>& stations);

/// Reads a dataset previously written with the two format_* functions.
ZonalDataset read_dataset(const std::string& load_path, const std::string& temperature_path);

}  // namespace stlf
