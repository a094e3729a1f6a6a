// Serial reference vs OpenMP kernels. Range arguments are problem sizes.

#include "stlf/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace k = stlf::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    return v;
}

template <auto Kernel>
void periodogram(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 1);
    std::vector<double> out(n / 2);
    for (auto _ : state) {
        Kernel(x, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Kernel>
void autocovariance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 2);
    std::vector<double> out(n / 4);
    for (auto _ : state) {
        Kernel(x, 0.0, out);
        benchmark::DoNotOptimize(out.data());
    }
}

// One reflector applied across a tall design, as in one QR step.
template <auto Kernel>
void reflector(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = 250;
    auto data = random_vector(rows * cols, 3);
    const auto v = random_vector(rows, 4);
    const k::ColumnMajorView a{data.data(), rows, cols};
    for (auto _ : state) {
        Kernel(a, 0, v, 1e-6, 1);
        benchmark::DoNotOptimize(data.data());
    }
}

template <auto Kernel>
void mat_vec(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = 250;
    const auto x = random_vector(rows * cols, 5);
    const auto beta = random_vector(cols, 6);
    std::vector<double> y(rows);
    for (auto _ : state) {
        Kernel(x, cols, beta, y);
        benchmark::DoNotOptimize(y.data());
    }
}

}  // namespace

BENCHMARK(periodogram<k::serial::periodogram>)->Name("periodogram/serial")->Arg(1000)->Arg(8760);
BENCHMARK(periodogram<k::omp::periodogram>)->Name("periodogram/omp")->Arg(1000)->Arg(8760)->UseRealTime();
BENCHMARK(autocovariance<k::serial::autocovariance_sums>)->Name("autocovariance/serial")->Arg(1000)->Arg(8760);
BENCHMARK(autocovariance<k::omp::autocovariance_sums>)->Name("autocovariance/omp")->Arg(1000)->Arg(8760)->UseRealTime();
BENCHMARK(reflector<k::serial::apply_reflector>)->Name("apply_reflector/serial")->Arg(2000)->Arg(8760);
BENCHMARK(reflector<k::omp::apply_reflector>)->Name("apply_reflector/omp")->Arg(2000)->Arg(8760)->UseRealTime();
BENCHMARK(mat_vec<k::serial::mat_vec>)->Name("mat_vec/serial")->Arg(2000)->Arg(8760);
BENCHMARK(mat_vec<k::omp::mat_vec>)->Name("mat_vec/omp")->Arg(2000)->Arg(8760)->UseRealTime();

BENCHMARK_MAIN();
