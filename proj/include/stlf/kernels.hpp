#pragma once

// Data-parallel inner loops shared by the similarity and regression modules.
//
// Each kernel has a serial reference in kernels::serial and an OpenMP version
// in kernels::omp. The parallel versions split work over independent output
// elements and evaluate every element with the same arithmetic as the serial
// code, so both produce bit-identical results for any thread count. The rest
// of the library calls the omp variants; the serial ones are kept for tests
// and the benchmark.

#include <cstddef>
#include <span>

namespace stlf::kernels {

/// Column-major m x n view over caller-owned storage.
struct ColumnMajorView {
    double* data;
    std::size_t rows;
    std::size_t cols;

    double& operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
    double* column(std::size_t c) const { return data + c * rows; }
};

namespace serial {

/// Periodogram ordinates P(w_j) = |sum_{t=1..N} x_t exp(-i t w_j)|^2 / N for
/// j = 1..out.size(), w_j = 2 pi j / N. out.size() must be <= N / 2.
void periodogram(std::span<const double> x, std::span<double> out);

/// Raw centered lag products c_k = sum_t (x_t - mean)(x_{t+k} - mean) for
/// k = 0..out.size()-1.
void autocovariance_sums(std::span<const double> x, double mean, std::span<double> out);

/// Applies the reflector H = I - tau v v^T (v spans rows k..m-1) to columns
/// first_col..cols-1 of a.
void apply_reflector(ColumnMajorView a, std::size_t k, std::span<const double> v, double tau,
                     std::size_t first_col);

/// y = X beta for a row-major rows x cols matrix.
void mat_vec(std::span<const double> x_row_major, std::size_t cols, std::span<const double> beta,
             std::span<double> y);

}  // namespace serial

namespace omp {

void periodogram(std::span<const double> x, std::span<double> out);
void autocovariance_sums(std::span<const double> x, double mean, std::span<double> out);
void apply_reflector(ColumnMajorView a, std::size_t k, std::span<const double> v, double tau,
                     std::size_t first_col);
void mat_vec(std::span<const double> x_row_major, std::size_t cols, std::span<const double> beta,
             std::span<double> y);

}  // namespace omp

}  // namespace stlf::kernels
