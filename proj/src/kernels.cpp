#include "stlf/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <omp.h>

namespace stlf::kernels {

namespace {

// cos/sin of 2 pi m / N for m = 0..N-1. Reducing the phase index t*j mod N
// before the lookup keeps every angle in [0, 2 pi) exactly.
struct Twiddles {
    std::vector<double> cos_table;
    std::vector<double> sin_table;

    explicit Twiddles(std::size_t n) : cos_table(n), sin_table(n) {
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
            cos_table[m] = std::cos(angle);
            sin_table[m] = std::sin(angle);
        }
    }
};

inline double ordinate(std::span<const double> x, const Twiddles& tw, std::size_t j) {
    const std::size_t n = x.size();
    double re = 0.0;
    double im = 0.0;
    std::size_t phase = j % n;  // (t * j) mod n for t = 1
    for (std::size_t t = 1; t <= n; ++t) {
        const double v = x[t - 1];
        re += v * tw.cos_table[phase];
        im -= v * tw.sin_table[phase];
        phase += j;
        if (phase >= n) phase -= n;
    }
    return (re * re + im * im) / static_cast<double>(n);
}

inline double lag_sum(std::span<const double> x, double mean, std::size_t k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t) s += (x[t] - mean) * (x[t + k] - mean);
    return s;
}

inline void reflect_column(ColumnMajorView a, std::size_t k, std::span<const double> v, double tau, std::size_t c) {
    double* col = a.column(c) + k;
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * col[i];
    const double s = tau * dot;
    for (std::size_t i = 0; i < v.size(); ++i) col[i] -= s * v[i];
}

inline double row_dot(std::span<const double> x, std::size_t cols, std::span<const double> beta, std::size_t r) {
    const double* row = x.data() + r * cols;
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * beta[c];
    return s;
}

}  // namespace

namespace serial {

void periodogram(std::span<const double> x, std::span<double> out) {
    if (out.empty()) return;
    const Twiddles tw(x.size());
    for (std::size_t j = 1; j <= out.size(); ++j) out[j - 1] = ordinate(x, tw, j);
}

void autocovariance_sums(std::span<const double> x, double mean, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = lag_sum(x, mean, k);
}

void apply_reflector(ColumnMajorView a, std::size_t k, std::span<const double> v, double tau,
                     std::size_t first_col) {
    for (std::size_t c = first_col; c < a.cols; ++c) reflect_column(a, k, v, tau, c);
}

void mat_vec(std::span<const double> x_row_major, std::size_t cols, std::span<const double> beta,
             std::span<double> y) {
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = row_dot(x_row_major, cols, beta, r);
}

}  // namespace serial

namespace omp {

void periodogram(std::span<const double> x, std::span<double> out) {
    if (out.empty()) return;
    const Twiddles tw(x.size());
    const auto n_out = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j <= n_out; ++j) {
        out[static_cast<std::size_t>(j - 1)] = ordinate(x, tw, static_cast<std::size_t>(j));
    }
}

void autocovariance_sums(std::span<const double> x, double mean, std::span<double> out) {
    const auto n_out = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n_out; ++k) {
        out[static_cast<std::size_t>(k)] = lag_sum(x, mean, static_cast<std::size_t>(k));
    }
}

void apply_reflector(ColumnMajorView a, std::size_t k, std::span<const double> v, double tau,
                     std::size_t first_col) {
    const auto lo = static_cast<std::ptrdiff_t>(first_col);
    const auto hi = static_cast<std::ptrdiff_t>(a.cols);
    // Small trailing blocks are not worth a fork/join.
    if ((hi - lo) * static_cast<std::ptrdiff_t>(v.size()) < 32768) {
        serial::apply_reflector(a, k, v, tau, first_col);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = lo; c < hi; ++c) reflect_column(a, k, v, tau, static_cast<std::size_t>(c));
}

void mat_vec(std::span<const double> x_row_major, std::size_t cols, std::span<const double> beta,
             std::span<double> y) {
    const auto rows = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        y[static_cast<std::size_t>(r)] = row_dot(x_row_major, cols, beta, static_cast<std::size_t>(r));
    }
}

}  // namespace omp

}  // namespace stlf::kernels
