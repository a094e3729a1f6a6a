#include "stlf/report.hpp"

#include "stlf/error.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace stlf {

using similarity::kAllMeasures;
using similarity::kFamilies;
using similarity::kMeasureCount;

std::string measures_csv(const std::vector<std::pair<std::string, similarity::SimilarityVector>>& rows) {
    std::string out = "label," + similarity::csv_header() + "\n";
    for (const auto& [label, v] : rows) out += label + "," + similarity::csv_row(v) + "\n";
    return out;
}

std::vector<MeasureColumn> read_measure_grid(const std::string& csv) {
    std::vector<MeasureColumn> grid;
    for (const char* label : kGridColumns) grid.push_back({label, false, {}});

    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::FormatError, "measures file is empty");
    const auto header = text::split(line);
    // label,x,y,n,<measures>...
    constexpr std::size_t first_measure = 4;
    if (header.size() < first_measure + kMeasureCount || header[0] != "label") {
        throw Error(ErrorKind::FormatError, "measures file has an unexpected header");
    }
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
        if (header[first_measure + m] != similarity::measure_name(kAllMeasures[m])) {
            throw Error(ErrorKind::FormatError, "measures file column order differs");
        }
    }
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const auto fields = text::split(line);
        if (fields.size() != header.size()) throw Error(ErrorKind::FormatError, "measures row has wrong field count");
        for (auto& col : grid) {
            if (fields[0] != col.label) continue;
            col.present = true;
            for (std::size_t m = 0; m < kMeasureCount; ++m) {
                const auto f = fields[first_measure + m];
                if (f == "inf") {
                    col.values[m] = std::numeric_limits<double>::infinity();
                } else {
                    col.values[m] = text::parse_double(f);
                }
            }
        }
    }
    return grid;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_grid(const std::vector<std::string>& heading, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(heading.size());
    for (std::size_t c = 0; c < heading.size(); ++c) width[c] = heading[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream out;
    const auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            line += (c == 0 ? "" : "  ") + pad(cells[c], width[c]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    };
    emit(heading);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& r : rows) emit(r);
    return out.str();
}

}  // namespace

std::string render_measure_grid(const std::vector<MeasureColumn>& columns) {
    std::vector<std::string> heading{"Measure"};
    for (const char* h : kGridHeadings) heading.emplace_back(h);
    std::vector<std::vector<std::string>> rows;
    for (const auto& fam : kFamilies) {
        std::vector<std::string> r{std::string(fam.label)};
        const auto m = static_cast<std::size_t>(fam.measure);
        for (const char* label : kGridColumns) {
            const auto it = std::find_if(columns.begin(), columns.end(),
                                         [&](const MeasureColumn& c) { return c.label == label; });
            if (it == columns.end() || !it->present) {
                r.emplace_back("absent");
            } else if (!it->values[m]) {
                r.emplace_back("NA");
            } else {
                r.push_back(text::format_sig(*it->values[m]));
            }
        }
        rows.push_back(std::move(r));
    }
    return render_grid(heading, rows);
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << "zone,model,set,n,r2,adj_r2,mae\n";
    for (const auto& r : rows) {
        out << r.zone << ',' << to_string(r.model) << ',' << r.set << ',' << r.stats.n << ','
            << text::format_exact(r.stats.r2) << ',' << text::format_exact(r.stats.adj_r2) << ','
            << text::format_exact(r.stats.mae) << '\n';
    }
    return out.str();
}

std::vector<MetricsRow> read_metrics_csv(const std::string& csv) {
    std::vector<MetricsRow> rows;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "zone,model,set,n,r2,adj_r2,mae") {
        throw Error(ErrorKind::FormatError, "metrics file has an unexpected header");
    }
    const auto number = [](std::string_view f) {
        if (f == "nan") return std::numeric_limits<double>::quiet_NaN();
        const auto v = text::parse_double(f);
        if (!v) throw Error(ErrorKind::FormatError, "metrics file: bad number '" + std::string(f) + "'");
        return *v;
    };
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const auto f = text::split(line);
        if (f.size() != 7) throw Error(ErrorKind::FormatError, "metrics row has wrong field count");
        MetricsRow r;
        r.zone = std::string(f[0]);
        r.model = parse_model_kind(f[1]);
        r.set = std::string(f[2]);
        r.stats.n = static_cast<std::size_t>(number(f[3]));
        r.stats.r2 = number(f[4]);
        r.stats.adj_r2 = number(f[5]);
        r.stats.mae = number(f[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string render_metrics_table(const std::vector<MetricsRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        char buf[3][32];
        std::snprintf(buf[0], sizeof buf[0], "%.4f", r.stats.r2);
        std::snprintf(buf[1], sizeof buf[1], "%.4f", r.stats.adj_r2);
        std::snprintf(buf[2], sizeof buf[2], "%.2f", r.stats.mae);
        cells.push_back({r.zone, to_string(r.model), r.set, std::to_string(r.stats.n), buf[0], buf[1], buf[2]});
    }
    return render_grid({"Zone", "Model", "Set", "N", "R2", "Adj R2", "MAE (MW)"}, cells);
}

std::string svg_line_plot(const std::string& title, const std::string& y_label, const std::vector<PlotSeries>& series,
                          const std::string& x_start_label) {
    constexpr double width = 900.0;
    constexpr double height = 420.0;
    constexpr double left = 80.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
    if (hi == lo) {
        hi += 1.0;
        lo -= 1.0;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const auto px = [&](std::size_t i) { return left + pw * (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)); };
    const auto py = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

    char buf[128];
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<g stroke=\"#444\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
    out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n", left - 6,
                      py(v) + 4, v);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">hours", left + pw / 2,
                  height - 20);
    out << buf << (x_start_label.empty() ? "" : " from " + x_start_label) << "</text>\n";
    std::snprintf(buf, sizeof buf, "<text transform=\"translate(18,%.1f) rotate(-90)\" text-anchor=\"middle\">",
                  top + ph / 2);
    out << buf << y_label << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = top + 14.0 * static_cast<double>(s) + 4;
        std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"12\" height=\"3\" fill=\"", left + pw - 150,
                      ly - 4);
        out << buf << series[s].color << "\"/>";
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\">", left + pw - 132, ly);
        out << buf << series[s].name << "</text>\n";
    }
    out << "</g>\n";
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i == 0 ? "" : " ", px(i), py(s.values[i]));
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace stlf
