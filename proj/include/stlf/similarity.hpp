#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stlf::similarity {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- shape-based

/// Lp distance for 1 <= p <= infinity (pass kInf for the max norm).
double d_lp(std::span<const double> x, std::span<const double> y, double p);
inline double d_euclidean(std::span<const double> x, std::span<const double> y) { return d_lp(x, y, 2.0); }

// ------------------------------------------------------------ correlation

/// Pearson correlation, clamped to [-1, 1].
double pearson_cor(std::span<const double> x, std::span<const double> y);

double d_cor1_from_cor(double cor);
/// ((1 - cor) / (1 + cor))^(beta / 2); +infinity at cor = -1.
double d_cor2_from_cor(double cor, double beta);

double d_cor1(std::span<const double> x, std::span<const double> y);
double d_cor2(std::span<const double> x, std::span<const double> y, double beta);

// --------------------------------------------------------- autocorrelation

/// Sample autocorrelation rho(0..max_lag); rho(0) = 1.
std::vector<double> acf_estimate(std::span<const double> x, std::size_t max_lag);

/// Diagonal weight matrix over lags 1..max_lag.
struct AcfWeights {
    enum class Kind { Identity, Geometric, Diagonal };

    Kind kind = Kind::Identity;
    double lambda = 1.0;          // Geometric: weight of lag k is lambda^k
    std::vector<double> diagonal;  // Diagonal: one weight per lag, starting at lag 1

    static AcfWeights identity() { return {}; }
    static AcfWeights geometric(double lambda) { return {Kind::Geometric, lambda, {}}; }
    static AcfWeights user_diagonal(std::vector<double> w) { return {Kind::Diagonal, 1.0, std::move(w)}; }

    /// Materialized weights for lags 1..max_lag. Throws NonPositiveWeight.
    std::vector<double> weights(std::size_t max_lag) const;
    std::string describe() const;

    friend bool operator==(const AcfWeights&, const AcfWeights&) = default;
};

/// sqrt(d^T W d) with d = rho_x[1..L] - rho_y[1..L].
double acf_weighted_distance(std::span<const double> rho_x, std::span<const double> rho_y,
                             std::span<const double> weights);
double d_acf(std::span<const double> x, std::span<const double> y, std::size_t max_lag, const AcfWeights& omega);

// -------------------------------------------------------------- periodogram

/// Ordinates P(w_j), j = 1..floor(N/2), with the series indexed t = 1..N.
std::vector<double> periodogram(std::span<const double> x);
/// Euclidean distance of periodograms; the normalized form divides each
/// periodogram by its series' sample variance first.
double d_periodogram(std::span<const double> x, std::span<const double> y, bool normalized);

// ---------------------------------------------------------------------- SAX

/// Standard normal quantile. Rational approximation refined by one Halley step.
double inverse_normal_cdf(double p);
/// Equiprobable cut points Phi^-1(k / a), k = 1..a-1.
std::vector<double> normal_breakpoints(int alphabet);

struct SaxWord {
    std::vector<int> symbols;
    std::vector<double> breakpoints;
    /// Points averaged into each symbol; the last one absorbs any remainder.
    std::vector<std::size_t> segment_lengths;
    std::size_t series_length = 0;
    int alphabet = 0;

    std::size_t word_length() const noexcept { return symbols.size(); }
    std::string to_string() const;  // "abca..."
};

SaxWord sax_transform(std::span<const double> x, std::size_t word_length, int alphabet);
/// MINDIST between two words built with the same (N, w, a).
double sax_mindist(const SaxWord& q, const SaxWord& c);
double d_sax(std::span<const double> x, std::span<const double> y, std::size_t word_length, int alphabet);

// ---------------------------------------------------------- full vector

enum class Measure : std::size_t {
    Euclidean,
    Manhattan,
    Minkowski,
    Chebyshev,
    Cor1,
    Cor2,
    Acf,
    Periodogram,
    PeriodogramNormalized,
    Sax,
};
inline constexpr std::size_t kMeasureCount = 10;
inline constexpr std::array<Measure, kMeasureCount> kAllMeasures{
    Measure::Euclidean, Measure::Manhattan, Measure::Minkowski, Measure::Chebyshev, Measure::Cor1,
    Measure::Cor2,      Measure::Acf,       Measure::Periodogram, Measure::PeriodogramNormalized, Measure::Sax};

/// Column name, e.g. "d_euc".
std::string_view measure_name(Measure m) noexcept;
std::optional<Measure> measure_from_name(std::string_view name) noexcept;

/// The five measure families reported side by side, one representative each.
struct Family {
    std::string_view label;
    Measure measure;
};
inline constexpr std::array<Family, 5> kFamilies{{
    {"Euclidean distance", Measure::Euclidean},
    {"Correlation-based distance", Measure::Cor1},
    {"Autocorrelation-based distance", Measure::Acf},
    {"Periodogram-based distance (normalized)", Measure::PeriodogramNormalized},
    {"Symbolic representation-based", Measure::Sax},
}};

struct SimilarityParams {
    double minkowski_p = 3.0;
    double cor2_beta = 1.0;
    std::size_t max_lag = 48;
    AcfWeights omega = AcfWeights::identity();
    std::size_t sax_segment_hours = 24;  // one symbol per day
    std::size_t sax_max_word = 32;
    std::size_t sax_word_length = 0;  // 0 = derive from series length
    int sax_alphabet = 4;
    bool znormalize_first = false;

    std::size_t effective_word_length(std::size_t n) const;
    friend bool operator==(const SimilarityParams&, const SimilarityParams&) = default;
};

struct SimilarityVector {
    std::array<std::optional<double>, kMeasureCount> values{};
    std::array<std::string, kMeasureCount> errors{};
    SimilarityParams params;
    std::size_t length = 0;
    std::size_t sax_word_length = 0;
    std::string x_label;
    std::string y_label;

    const std::optional<double>& operator[](Measure m) const { return values[static_cast<std::size_t>(m)]; }
    /// Throws when the measure failed for this pair.
    double at(Measure m) const;
};

SimilarityVector similarity_vector(std::span<const double> x, std::span<const double> y,
                                   const SimilarityParams& params = {}, std::string x_label = "x",
                                   std::string y_label = "y");

/// One-row CSV export; column order is stable and grouped by family.
std::string csv_header();
std::string csv_row(const SimilarityVector& v);

}  // namespace stlf::similarity
