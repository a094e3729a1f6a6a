#include "stlf/similarity.hpp"

#include "stlf/core_data.hpp"
#include "stlf/error.hpp"
#include "stlf/kernels.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stlf::similarity {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    "series lengths differ (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double require_nonconstant(std::span<const double> x, const char* what) {
    const auto [mean, sd] = sample_mean_sd(x);
    if (sd < kZeroVarianceThreshold) {
        throw Error(ErrorKind::ZeroVariance, std::string(what) + " is constant");
    }
    return sd * sd;
}

}  // namespace

double d_lp(std::span<const double> x, std::span<const double> y, double p) {
    require_same_length(x, y);
    if (x.empty()) throw Error(ErrorKind::InvalidArgument, "Lp distance of empty series");
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "Lp order must be >= 1");

    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), p);
    return std::pow(s, 1.0 / p);
}

double pearson_cor(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y);
    if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "correlation needs at least 2 points");
    require_nonconstant(x, "first series");
    require_nonconstant(y, "second series");

    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // sqrt(sxx * syy) rather than sqrt(sxx) * sqrt(syy): for x == y this is
    // exactly sxx, so COR(x, x) == 1 with no rounding residue.
    const double cor = sxy / std::sqrt(sxx * syy);
    return std::clamp(cor, -1.0, 1.0);
}

double d_cor1_from_cor(double cor) { return std::sqrt(2.0 * (1.0 - cor)); }

double d_cor2_from_cor(double cor, double beta) {
    if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "d_cor2 beta must be > 0");
    if (cor <= -1.0) return kInf;
    return std::pow((1.0 - cor) / (1.0 + cor), beta / 2.0);
}

double d_cor1(std::span<const double> x, std::span<const double> y) { return d_cor1_from_cor(pearson_cor(x, y)); }

double d_cor2(std::span<const double> x, std::span<const double> y, double beta) {
    return d_cor2_from_cor(pearson_cor(x, y), beta);
}

std::vector<double> acf_estimate(std::span<const double> x, std::size_t max_lag) {
    if (x.size() < max_lag + 2) {
        throw Error(ErrorKind::LagTooLarge, "max_lag " + std::to_string(max_lag) + " needs at least " +
                                                std::to_string(max_lag + 2) + " points, got " +
                                                std::to_string(x.size()));
    }
    require_nonconstant(x, "series");
    std::vector<double> sums(max_lag + 1);
    kernels::omp::autocovariance_sums(x, mean_of(x), sums);
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) rho[k] = sums[k] / sums[0];
    return rho;
}

std::vector<double> AcfWeights::weights(std::size_t max_lag) const {
    std::vector<double> w(max_lag, 1.0);
    switch (kind) {
        case Kind::Identity:
            break;
        case Kind::Geometric:
            if (!(lambda > 0.0)) throw Error(ErrorKind::NonPositiveWeight, "geometric lambda must be > 0");
            for (std::size_t k = 0; k < max_lag; ++k) w[k] = std::pow(lambda, static_cast<double>(k + 1));
            break;
        case Kind::Diagonal:
            if (diagonal.size() < max_lag) {
                throw Error(ErrorKind::InvalidArgument, "diagonal weights shorter than max_lag");
            }
            for (std::size_t k = 0; k < max_lag; ++k) w[k] = diagonal[k];
            break;
    }
    for (double v : w) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::NonPositiveWeight, "ACF weights must be > 0");
    }
    return w;
}

std::string AcfWeights::describe() const {
    switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::Geometric: return "geometric(" + text::format_exact(lambda) + ")";
        case Kind::Diagonal: return "diagonal(" + std::to_string(diagonal.size()) + ")";
    }
    return "?";
}

double acf_weighted_distance(std::span<const double> rho_x, std::span<const double> rho_y,
                             std::span<const double> weights) {
    require_same_length(rho_x, rho_y);
    if (rho_x.size() != weights.size() + 1) {
        throw Error(ErrorKind::InvalidArgument, "weights must cover lags 1..max_lag");
    }
    double s = 0.0;
    for (std::size_t k = 1; k < rho_x.size(); ++k) {
        const double d = rho_x[k] - rho_y[k];
        s += weights[k - 1] * d * d;
    }
    return std::sqrt(s);
}

double d_acf(std::span<const double> x, std::span<const double> y, std::size_t max_lag, const AcfWeights& omega) {
    require_same_length(x, y);
    const auto w = omega.weights(max_lag);
    return acf_weighted_distance(acf_estimate(x, max_lag), acf_estimate(y, max_lag), w);
}

std::vector<double> periodogram(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "periodogram needs at least 2 points");
    std::vector<double> p(x.size() / 2);
    kernels::omp::periodogram(x, p);
    return p;
}

double d_periodogram(std::span<const double> x, std::span<const double> y, bool normalized) {
    require_same_length(x, y);
    auto px = periodogram(x);
    auto py = periodogram(y);
    if (normalized) {
        const double vx = require_nonconstant(x, "first series");
        const double vy = require_nonconstant(y, "second series");
        for (double& v : px) v /= vx;
        for (double& v : py) v /= vy;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < px.size(); ++j) {
        const double d = px[j] - py[j];
        s += d * d;
    }
    return std::sqrt(s);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile probability must be in (0, 1)");

    // Acklam's rational approximation (relative error ~1e-9).
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the erfc-based CDF.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::vector<double> normal_breakpoints(int alphabet) {
    if (alphabet < 2 || alphabet > 10) throw Error(ErrorKind::InvalidArgument, "SAX alphabet must be in [2, 10]");
    std::vector<double> bp(static_cast<std::size_t>(alphabet - 1));
    for (int k = 1; k < alphabet; ++k) {
        // Exact symmetry: mirror the lower half so Phi^-1(1 - p) == -Phi^-1(p).
        if (2 * k == alphabet) {
            bp[static_cast<std::size_t>(k - 1)] = 0.0;
        } else if (2 * k > alphabet) {
            bp[static_cast<std::size_t>(k - 1)] = -bp[static_cast<std::size_t>(alphabet - k - 1)];
        } else {
            bp[static_cast<std::size_t>(k - 1)] = inverse_normal_cdf(static_cast<double>(k) / alphabet);
        }
    }
    return bp;
}

std::string SaxWord::to_string() const {
    std::string s;
    for (int sym : symbols) s.push_back(static_cast<char>('a' + sym));
    return s;
}

SaxWord sax_transform(std::span<const double> x, std::size_t word_length, int alphabet) {
    if (word_length < 1 || word_length > x.size()) {
        throw Error(ErrorKind::InvalidArgument, "SAX word length must be in [1, N]");
    }
    SaxWord word;
    word.breakpoints = normal_breakpoints(alphabet);
    word.alphabet = alphabet;
    word.series_length = x.size();

    const auto z = znormalize(x);
    const std::size_t base = x.size() / word_length;
    word.segment_lengths.assign(word_length, base);
    word.segment_lengths.back() = x.size() - base * (word_length - 1);

    std::size_t pos = 0;
    for (std::size_t s = 0; s < word_length; ++s) {
        const std::size_t len = word.segment_lengths[s];
        double sum = 0.0;
        for (std::size_t i = pos; i < pos + len; ++i) sum += z[i];
        pos += len;
        const double mean = sum / static_cast<double>(len);
        // Cell k covers [bp[k-1], bp[k]); values on a cut point go up.
        const auto it = std::upper_bound(word.breakpoints.begin(), word.breakpoints.end(), mean);
        word.symbols.push_back(static_cast<int>(it - word.breakpoints.begin()));
    }
    return word;
}

double sax_mindist(const SaxWord& q, const SaxWord& c) {
    if (q.alphabet != c.alphabet || q.series_length != c.series_length || q.segment_lengths != c.segment_lengths) {
        throw Error(ErrorKind::ParameterMismatch, "SAX words built with different (N, w, a)");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.symbols.size(); ++i) {
        const int r = q.symbols[i];
        const int t = c.symbols[i];
        if (std::abs(r - t) <= 1) continue;
        const double cell = q.breakpoints[static_cast<std::size_t>(std::max(r, t) - 1)] -
                            q.breakpoints[static_cast<std::size_t>(std::min(r, t))];
        // Weighting by segment length reduces to (N / w) * sum(cell^2) for
        // equal segments and keeps the lower bound when the last one is longer.
        s += static_cast<double>(q.segment_lengths[i]) * cell * cell;
    }
    return std::sqrt(s);
}

double d_sax(std::span<const double> x, std::span<const double> y, std::size_t word_length, int alphabet) {
    require_same_length(x, y);
    return sax_mindist(sax_transform(x, word_length, alphabet), sax_transform(y, word_length, alphabet));
}

std::string_view measure_name(Measure m) noexcept {
    switch (m) {
        case Measure::Euclidean: return "d_euc";
        case Measure::Manhattan: return "d_manhattan";
        case Measure::Minkowski: return "d_minkowski";
        case Measure::Chebyshev: return "d_linf";
        case Measure::Cor1: return "d_cor1";
        case Measure::Cor2: return "d_cor2";
        case Measure::Acf: return "d_acf";
        case Measure::Periodogram: return "d_per";
        case Measure::PeriodogramNormalized: return "d_per_norm";
        case Measure::Sax: return "d_sax";
    }
    return "?";
}

std::optional<Measure> measure_from_name(std::string_view name) noexcept {
    for (Measure m : kAllMeasures) {
        if (measure_name(m) == name) return m;
    }
    return std::nullopt;
}

std::size_t SimilarityParams::effective_word_length(std::size_t n) const {
    if (n == 0) return 0;
    std::size_t w = sax_word_length;
    if (w == 0) {
        w = std::max<std::size_t>(1, n / std::max<std::size_t>(1, sax_segment_hours));
        w = std::min(w, sax_max_word);
    }
    return std::clamp<std::size_t>(w, 1, n);
}

double SimilarityVector::at(Measure m) const {
    const auto& v = values[static_cast<std::size_t>(m)];
    if (!v) {
        throw Error(ErrorKind::InvalidArgument, std::string(measure_name(m)) +
                                                    " unavailable: " + errors[static_cast<std::size_t>(m)]);
    }
    return *v;
}

SimilarityVector similarity_vector(std::span<const double> x, std::span<const double> y,
                                   const SimilarityParams& params, std::string x_label, std::string y_label) {
    require_same_length(x, y);

    SimilarityVector out;
    out.params = params;
    out.length = x.size();
    out.sax_word_length = params.effective_word_length(x.size());
    out.x_label = std::move(x_label);
    out.y_label = std::move(y_label);

    std::vector<double> zx;
    std::vector<double> zy;
    std::string norm_error;
    if (params.znormalize_first) {
        try {
            zx = znormalize(x);
            zy = znormalize(y);
            x = zx;
            y = zy;
        } catch (const Error& e) {
            norm_error = e.what();
        }
    }

    const auto record = [&](Measure m, auto&& compute) {
        const auto i = static_cast<std::size_t>(m);
        if (!norm_error.empty()) {
            out.errors[i] = norm_error;
            return;
        }
        try {
            out.values[i] = compute();
        } catch (const Error& e) {
            out.errors[i] = e.what();
        }
    };

    record(Measure::Euclidean, [&] { return d_lp(x, y, 2.0); });
    record(Measure::Manhattan, [&] { return d_lp(x, y, 1.0); });
    record(Measure::Minkowski, [&] { return d_lp(x, y, params.minkowski_p); });
    record(Measure::Chebyshev, [&] { return d_lp(x, y, kInf); });

    std::optional<double> cor;
    std::string cor_error;
    try {
        cor = pearson_cor(x, y);
    } catch (const Error& e) {
        cor_error = e.what();
    }
    const auto from_cor = [&](auto&& f) {
        if (!cor) throw Error(ErrorKind::ZeroVariance, cor_error);
        return f(*cor);
    };
    record(Measure::Cor1, [&] { return from_cor([](double c) { return d_cor1_from_cor(c); }); });
    record(Measure::Cor2, [&] { return from_cor([&](double c) { return d_cor2_from_cor(c, params.cor2_beta); }); });

    record(Measure::Acf, [&] { return d_acf(x, y, params.max_lag, params.omega); });
    record(Measure::Periodogram, [&] { return d_periodogram(x, y, false); });
    record(Measure::PeriodogramNormalized, [&] { return d_periodogram(x, y, true); });
    record(Measure::Sax, [&] { return d_sax(x, y, out.sax_word_length, params.sax_alphabet); });
    return out;
}

std::string csv_header() {
    std::string h = "x,y,n";
    for (Measure m : kAllMeasures) {
        h += ',';
        h += measure_name(m);
    }
    h += ",minkowski_p,cor2_beta,max_lag,omega,sax_w,sax_a,znormalized";
    return h;
}

std::string csv_row(const SimilarityVector& v) {
    std::ostringstream row;
    row << v.x_label << ',' << v.y_label << ',' << v.length;
    for (Measure m : kAllMeasures) {
        const auto& val = v[m];
        row << ',' << (val ? text::format_exact(*val) : std::string("NA"));
    }
    row << ',' << text::format_exact(v.params.minkowski_p) << ',' << text::format_exact(v.params.cor2_beta) << ','
        << v.params.max_lag << ',' << v.params.omega.describe() << ',' << v.sax_word_length << ','
        << v.params.sax_alphabet << ',' << (v.params.znormalize_first ? 1 : 0);
    return row.str();
}

}  // namespace stlf::similarity
