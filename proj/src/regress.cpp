#include "stlf/regress.hpp"

#include "stlf/core_data.hpp"
#include "stlf/error.hpp"
#include "stlf/kernels.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace stlf {

double mean_absolute_error(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw Error(ErrorKind::LengthMismatch, "y and y_hat differ in length");
    if (y.empty()) throw Error(ErrorKind::InvalidArgument, "MAE of no observations");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - y_hat[i]);
    return s / static_cast<double>(y.size());
}

double r_squared(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw Error(ErrorKind::LengthMismatch, "y and y_hat differ in length");
    if (y.size() < 2) throw Error(ErrorKind::InvalidArgument, "R^2 needs at least 2 observations");
    const auto [mean, sd] = sample_mean_sd(y);
    if (sd < kZeroVarianceThreshold) throw Error(ErrorKind::ZeroVariance, "R^2 undefined for constant y");
    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - y_hat[i];
        sse += e * e;
        sst += (y[i] - mean) * (y[i] - mean);
    }
    return 1.0 - sse / sst;
}

double adjusted_r_squared(double r2, std::size_t n, std::size_t p_predictors) {
    if (n <= p_predictors + 1) {
        throw Error(ErrorKind::DegenerateDof, "adjusted R^2 needs n > p + 1 (n = " + std::to_string(n) +
                                                  ", p = " + std::to_string(p_predictors) + ")");
    }
    const auto nn = static_cast<double>(n);
    return 1.0 - (1.0 - r2) * (nn - 1.0) / (nn - static_cast<double>(p_predictors) - 1.0);
}

namespace {

// Fit summaries for tiny or degenerate training sets keep whatever is defined
// and store NaN for the rest instead of failing the fit.
FitStats lenient_metrics(std::span<const double> y, std::span<const double> y_hat, std::size_t p_predictors) {
    FitStats s;
    s.n = y.size();
    s.mae = mean_absolute_error(y, y_hat);
    s.r2 = std::numeric_limits<double>::quiet_NaN();
    s.adj_r2 = s.r2;
    try {
        s.r2 = r_squared(y, y_hat);
        s.adj_r2 = adjusted_r_squared(s.r2, y.size(), p_predictors);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::DegenerateDof &&
            e.kind() != ErrorKind::InvalidArgument) {
            throw;
        }
    }
    return s;
}

}  // namespace

FitStats metrics(std::span<const double> y, std::span<const double> y_hat, std::size_t p_predictors) {
    FitStats s;
    s.n = y.size();
    s.mae = mean_absolute_error(y, y_hat);
    s.r2 = r_squared(y, y_hat);
    s.adj_r2 = adjusted_r_squared(s.r2, y.size(), p_predictors);
    return s;
}

std::vector<double> solve_least_squares(std::span<const double> x_row_major, std::size_t rows, std::size_t cols,
                                        std::span<const double> y) {
    if (x_row_major.size() != rows * cols || y.size() != rows) {
        throw Error(ErrorKind::LengthMismatch, "design and target sizes disagree");
    }
    if (cols == 0) throw Error(ErrorKind::InvalidArgument, "no columns");
    if (rows < cols) {
        throw Error(ErrorKind::RankDeficient, std::to_string(rows) + " rows cannot determine " +
                                                  std::to_string(cols) + " coefficients");
    }

    // Column-major working copy, each column scaled to unit norm, with y appended.
    std::vector<double> work((cols + 1) * rows);
    std::vector<double> scale(cols);
    const kernels::ColumnMajorView a{work.data(), rows, cols + 1};
    for (std::size_t c = 0; c < cols; ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) ss += x_row_major[r * cols + c] * x_row_major[r * cols + c];
        if (ss == 0.0) throw Error(ErrorKind::RankDeficient, "column " + std::to_string(c) + " is identically zero");
        scale[c] = 1.0 / std::sqrt(ss);
        for (std::size_t r = 0; r < rows; ++r) a(r, c) = x_row_major[r * cols + c] * scale[c];
    }
    for (std::size_t r = 0; r < rows; ++r) a(r, cols) = y[r];

    std::vector<double> diag(cols);
    std::vector<double> v(rows);
    // Reflector k is (v_head[k], a(k+1.., k)) with factor tau[k]; kept for refinement.
    std::vector<double> v_head(cols, 0.0);
    std::vector<double> tau(cols, 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        const std::size_t len = rows - k;
        const double* col = a.column(k) + k;
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            diag[k] = 0.0;
            continue;
        }
        const double alpha = col[0] > 0.0 ? -norm : norm;
        for (std::size_t i = 0; i < len; ++i) v[i] = col[i];
        v[0] -= alpha;
        double vtv = 0.0;
        for (std::size_t i = 0; i < len; ++i) vtv += v[i] * v[i];
        diag[k] = alpha;
        a(k, k) = alpha;
        v_head[k] = v[0];
        for (std::size_t i = 1; i < len; ++i) a(k + i, k) = v[i];
        if (vtv > 0.0) {
            tau[k] = 2.0 / vtv;
            kernels::omp::apply_reflector(a, k, std::span<const double>(v.data(), len), tau[k], k + 1);
        }
    }

    double max_diag = 0.0;
    for (double d : diag) max_diag = std::max(max_diag, std::abs(d));
    for (std::size_t k = 0; k < cols; ++k) {
        if (!(std::abs(diag[k]) >= kRankTolerance * max_diag) || max_diag == 0.0) {
            throw Error(ErrorKind::RankDeficient, "numerical rank below " + std::to_string(cols) +
                                                      " (column " + std::to_string(k) + ")");
        }
    }

    // Solves R z = (Q^T rhs)[0..cols) where Q^T rhs already sits in column `cols`.
    auto back_solve = [&] {
        std::vector<double> z(cols);
        for (std::size_t k = cols; k-- > 0;) {
            double s = a(k, cols);
            for (std::size_t j = k + 1; j < cols; ++j) s -= a(k, j) * z[j];
            z[k] = s / a(k, k);
        }
        for (std::size_t c = 0; c < cols; ++c) z[c] *= scale[c];
        return z;
    };
    std::vector<double> beta = back_solve();

    // Iterative refinement against an extended-precision residual.
    for (int step = 0; step < 3; ++step) {
        for (std::size_t r = 0; r < rows; ++r) {
            long double fit = 0.0L;
            for (std::size_t c = 0; c < cols; ++c) {
                fit += static_cast<long double>(x_row_major[r * cols + c]) * static_cast<long double>(beta[c]);
            }
            a(r, cols) = static_cast<double>(static_cast<long double>(y[r]) - fit);
        }
        for (std::size_t k = 0; k < cols; ++k) {
            if (tau[k] == 0.0) continue;
            double s = v_head[k] * a(k, cols);
            for (std::size_t i = k + 1; i < rows; ++i) s += a(i, k) * a(i, cols);
            s *= tau[k];
            a(k, cols) -= s * v_head[k];
            for (std::size_t i = k + 1; i < rows; ++i) a(i, cols) -= s * a(i, k);
        }
        const std::vector<double> delta = back_solve();
        bool changed = false;
        for (std::size_t c = 0; c < cols; ++c) {
            const double next = beta[c] + delta[c];
            changed = changed || next != beta[c];
            beta[c] = next;
        }
        if (!changed) break;
    }
    return beta;
}

std::optional<double> FittedModel::coefficient(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return coefficients[i];
    }
    return std::nullopt;
}

namespace {

void write_stats(std::ostringstream& out, const char* prefix, const FitStats& s) {
    out << prefix << ".n = " << s.n << '\n';
    out << prefix << ".mae = " << text::format_exact(s.mae) << '\n';
    out << prefix << ".r2 = " << text::format_exact(s.r2) << '\n';
    out << prefix << ".adj_r2 = " << text::format_exact(s.adj_r2) << '\n';
}

double require_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorKind::FormatError, "model file missing '" + key + "'");
    if (it->second == "nan") return std::numeric_limits<double>::quiet_NaN();
    const auto v = text::parse_double(it->second);
    if (!v) throw Error(ErrorKind::FormatError, "model file: bad number for '" + key + "'");
    return *v;
}

FitStats read_stats(const std::map<std::string, std::string>& kv, const std::string& prefix) {
    FitStats s;
    s.n = static_cast<std::size_t>(require_double(kv, prefix + ".n"));
    s.mae = require_double(kv, prefix + ".mae");
    s.r2 = require_double(kv, prefix + ".r2");
    s.adj_r2 = require_double(kv, prefix + ".adj_r2");
    return s;
}

}  // namespace

std::string FittedModel::serialize() const {
    std::ostringstream out;
    out << "kind = " << to_string(kind) << '\n';
    out << "weekday_only = " << (options.weekday_only ? 1 : 0) << '\n';
    out << "coefficients = " << coefficients.size() << '\n';
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        out << "coef." << labels[i] << " = " << text::format_exact(coefficients[i]) << '\n';
    }
    write_stats(out, "train", train_stats);
    if (test_stats) write_stats(out, "test", *test_stats);
    return out.str();
}

FittedModel FittedModel::deserialize(const std::string& content) {
    FittedModel m;
    std::map<std::string, std::string> kv;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find(" = ");
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::FormatError, "model file line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(text::trim(t.substr(0, eq)));
        const std::string value(text::trim(t.substr(eq + 3)));
        if (key.rfind("coef.", 0) == 0) {
            const auto v = text::parse_double(value);
            if (!v) throw Error(ErrorKind::FormatError, "model file: bad coefficient '" + key + "'");
            m.labels.push_back(key.substr(5));
            m.coefficients.push_back(*v);
        } else {
            kv[key] = value;
        }
    }
    if (!kv.contains("kind")) throw Error(ErrorKind::FormatError, "model file missing 'kind'");
    m.kind = parse_model_kind(kv["kind"]);
    m.options.weekday_only = kv.contains("weekday_only") && kv["weekday_only"] == "1";
    if (static_cast<std::size_t>(require_double(kv, "coefficients")) != m.coefficients.size()) {
        throw Error(ErrorKind::FormatError, "model file coefficient count mismatch");
    }
    m.train_stats = read_stats(kv, "train");
    if (kv.contains("test.n")) m.test_stats = read_stats(kv, "test");
    return m;
}

FittedModel fit_ols(const DesignMatrix& x) {
    for (double v : x.target) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite target");
    }
    FittedModel m;
    m.kind = x.kind;
    m.options = x.options;
    m.labels = x.labels();
    m.coefficients = solve_least_squares(x.values, x.rows(), x.cols(), x.target);
    m.train_stats = lenient_metrics(x.target, predict(m, x), m.predictors());
    return m;
}

namespace {

// A rare f2 dummy (one day x hour cell) can land entirely in the test split.
DesignMatrix drop_columns(const DesignMatrix& x, const std::vector<bool>& drop) {
    DesignMatrix out = x;
    out.columns.clear();
    out.values.clear();
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (drop[c]) {
            out.omitted.push_back(x.columns[c].label);
        } else {
            out.columns.push_back(x.columns[c]);
        }
    }
    out.values.reserve(x.rows() * out.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            if (!drop[c]) out.values.push_back(x.at(r, c));
        }
    }
    return out;
}

}  // namespace

FittedModel fit_and_evaluate(const DesignMatrix& train, const DesignMatrix& test) {
    if (train.kind == ModelKind::F2 && train.labels() == test.labels()) {
        std::vector<bool> drop(train.cols(), true);
        for (std::size_t r = 0; r < train.rows(); ++r) {
            for (std::size_t c = 0; c < train.cols(); ++c) {
                if (train.at(r, c) != 0.0) drop[c] = false;
            }
        }
        if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
            const DesignMatrix tr = drop_columns(train, drop);
            const DesignMatrix te = drop_columns(test, drop);
            FittedModel m = fit_ols(tr);
            m.test_stats = lenient_metrics(te.target, predict(m, te), m.predictors());
            return m;
        }
    }
    FittedModel m = fit_ols(train);
    m.test_stats = lenient_metrics(test.target, predict(m, test), m.predictors());
    return m;
}

std::vector<double> predict(const FittedModel& model, const DesignMatrix& x) {
    if (x.kind != model.kind || x.labels() != model.labels) {
        throw Error(ErrorKind::SchemaMismatch, "design columns do not match the model");
    }
    std::vector<double> y(x.rows());
    kernels::omp::mat_vec(x.values, x.cols(), model.coefficients, y);
    return y;
}

std::vector<double> forecast(const FittedModel& model, const ZoneSeries& zone) {
    return predict(model, build_design_for_columns(model.kind, zone, model.options, model.labels));
}

}  // namespace stlf
