#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "qnbm/kernels.hpp"
#include "qnbm/models.hpp"
#include "qnbm/statevector.hpp"

namespace {

using namespace qnbm;

std::vector<Complex> random_amps(unsigned n) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    std::vector<Complex> a(std::size_t{1} << n);
    for (auto& x : a) x = {g(rng), g(rng)};
    return a;
}

const Mat2 kRy = Gate::ry(0.37).matrix();

void BM_Apply1qSerial(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    const auto q = static_cast<unsigned>(st.range(0) / 2);
    for (auto _ : st) {
        kernels::serial::apply_1q(a, q, kRy);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(a.size()));
}

void BM_Apply1qParallel(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    const auto q = static_cast<unsigned>(st.range(0) / 2);
    for (auto _ : st) {
        kernels::apply_1q(a, q, kRy);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(a.size()));
}

void BM_ControlledSerial(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        kernels::serial::apply_controlled_1q(a, 0, 1, kRy);
        benchmark::ClobberMemory();
    }
}

void BM_ControlledParallel(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        kernels::apply_controlled_1q(a, 0, 1, kRy);
        benchmark::ClobberMemory();
    }
}

void BM_XxSerial(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        kernels::serial::apply_xx(a, 0, 2, 0.3);
        benchmark::ClobberMemory();
    }
}

void BM_XxParallel(benchmark::State& st) {
    auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) {
        kernels::apply_xx(a, 0, 2, 0.3);
        benchmark::ClobberMemory();
    }
}

std::vector<unsigned> low_qubits(unsigned k) {
    std::vector<unsigned> q(k);
    std::iota(q.begin(), q.end(), 0U);
    return q;
}

void BM_MarginalSerial(benchmark::State& st) {
    const auto a = random_amps(static_cast<unsigned>(st.range(0)));
    const auto q = low_qubits(5);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::marginal(a, q));
}

void BM_MarginalParallel(benchmark::State& st) {
    const auto a = random_amps(static_cast<unsigned>(st.range(0)));
    const auto q = low_qubits(5);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::marginal(a, q));
}

void BM_NormSerial(benchmark::State& st) {
    const auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::norm_squared(a));
}

void BM_NormParallel(benchmark::State& st) {
    const auto a = random_amps(static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::norm_squared(a));
}

// One loss evaluation's worth of model work.
void BM_QnbmDistribution(benchmark::State& st) {
    const QnbmTopology t{static_cast<unsigned>(st.range(0)), static_cast<unsigned>(st.range(1)), 4};
    ParamVector p(t.param_count(), 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(qnbm_distribution(t, p));
}

void BM_QcbmDistribution(benchmark::State& st) {
    const QcbmConfig c{5, static_cast<unsigned>(st.range(0))};
    ParamVector p(c.param_count(), 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(qcbm_distribution(c, p));
}

}  // namespace

BENCHMARK(BM_Apply1qSerial)->DenseRange(14, 22, 4);
BENCHMARK(BM_Apply1qParallel)->DenseRange(14, 22, 4);
BENCHMARK(BM_ControlledSerial)->DenseRange(14, 22, 4);
BENCHMARK(BM_ControlledParallel)->DenseRange(14, 22, 4);
BENCHMARK(BM_XxSerial)->DenseRange(14, 22, 4);
BENCHMARK(BM_XxParallel)->DenseRange(14, 22, 4);
BENCHMARK(BM_MarginalSerial)->DenseRange(14, 22, 4);
BENCHMARK(BM_MarginalParallel)->DenseRange(14, 22, 4);
BENCHMARK(BM_NormSerial)->DenseRange(14, 22, 4);
BENCHMARK(BM_NormParallel)->DenseRange(14, 22, 4);
BENCHMARK(BM_QnbmDistribution)->Args({3, 0})->Args({4, 0})->Args({3, 3});
BENCHMARK(BM_QcbmDistribution)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
