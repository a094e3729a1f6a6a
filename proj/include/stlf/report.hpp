#pragma once

#include "stlf/regress.hpp"
#include "stlf/similarity.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace stlf {

/// One column of the measure grid: a labelled similarity vector, or absent.
struct MeasureColumn {
    std::string label;
    bool present = false;
    std::array<std::optional<double>, similarity::kMeasureCount> values{};
};

inline constexpr std::array<const char*, 5> kGridColumns{"raw", "f1_clean", "f2_clean", "f1_attacked", "f2_attacked"};
inline constexpr std::array<const char*, 5> kGridHeadings{"Raw data", "f1 clean", "f2 clean", "f1 attacked",
                                                          "f2 attacked"};

/// measures.csv: "label," + similarity::csv_header(), one row per computed column.
std::string measures_csv(const std::vector<std::pair<std::string, similarity::SimilarityVector>>& rows);
/// Parses measures.csv back into the five grid columns (missing labels are absent).
std::vector<MeasureColumn> read_measure_grid(const std::string& csv);

/// Family rows x grid columns as aligned text.
std::string render_measure_grid(const std::vector<MeasureColumn>& columns);

struct MetricsRow {
    std::string zone;
    ModelKind model = ModelKind::F1;
    std::string set;  // "train" or "test"
    FitStats stats;
};

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::string& csv);
std::string render_metrics_table(const std::vector<MetricsRow>& rows);

struct PlotSeries {
    std::string name;
    std::vector<double> values;
    std::string color;
};

/// Standalone SVG line chart; series share the x axis (hour offset).
std::string svg_line_plot(const std::string& title, const std::string& y_label, const std::vector<PlotSeries>& series,
                          const std::string& x_start_label = "");

}  // namespace stlf
