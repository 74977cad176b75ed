#include <gtest/gtest.h>

#include <random>

#include "qnbm/kernels.hpp"
#include "qnbm/statevector.hpp"
#include "test_helpers.hpp"

namespace qnbm {
namespace {

// Forces the OpenMP code path for every array size while in scope.
class ParallelKernels : public ::testing::Test {
  protected:
    void SetUp() override {
        saved_ = kernels::parallel_min_size();
        kernels::set_parallel_min_size(2);
    }
    void TearDown() override { kernels::set_parallel_min_size(saved_); }

    std::size_t saved_ = 0;
};

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

TEST_F(ParallelKernels, GatesMatchSerialReference) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (unsigned n = 2; n <= 10; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            auto par = testing::random_amplitudes(rng, n);
            auto ser = par;
            const unsigned a = static_cast<unsigned>(rng() % n);
            unsigned b = static_cast<unsigned>(rng() % n);
            if (b == a) b = (a + 1) % n;
            const Mat2 m = Gate::rx(angle(rng)).matrix();
            const double phi = angle(rng);

            kernels::apply_1q(par, a, m);
            kernels::serial::apply_1q(ser, a, m);
            kernels::apply_controlled_1q(par, a, b, m);
            kernels::serial::apply_controlled_1q(ser, a, b, m);
            kernels::apply_xx(par, b, a, phi);
            kernels::serial::apply_xx(ser, b, a, phi);
            EXPECT_LT(max_diff(par, ser), 1e-14);
        }
    }
}

TEST_F(ParallelKernels, ReductionsMatchSerialReference) {
    std::mt19937_64 rng(12);
    for (unsigned n = 1; n <= 14; ++n) {
        const auto amps = testing::random_amplitudes(rng, n);
        EXPECT_NEAR(kernels::norm_squared(amps), kernels::serial::norm_squared(amps), 1e-13);
        const unsigned q = static_cast<unsigned>(rng() % n);
        EXPECT_NEAR(kernels::outcome_probability(amps, q, 1), kernels::serial::outcome_probability(amps, q, 1),
                    1e-13);

        std::vector<unsigned> measured;
        for (unsigned k = 0; k < n; k += 2) measured.push_back(n - 1 - k);
        const auto par = kernels::marginal(amps, measured);
        const auto ser = kernels::serial::marginal(amps, measured);
        ASSERT_EQ(par.size(), ser.size());
        for (std::size_t y = 0; y < par.size(); ++y) EXPECT_NEAR(par[y], ser[y], 1e-13);
    }
}

TEST_F(ParallelKernels, CollapseMatchesSerialReference) {
    std::mt19937_64 rng(13);
    auto par = testing::random_amplitudes(rng, 9);
    auto ser = par;
    kernels::collapse(par, 4, 1, 1.7);
    kernels::serial::collapse(ser, 4, 1, 1.7);
    EXPECT_EQ(par, ser);
}

TEST(KernelThreshold, BelowThresholdDelegatesToSerial) {
    std::mt19937_64 rng(14);
    auto a = testing::random_amplitudes(rng, 6);
    auto b = a;
    ASSERT_GT(kernels::parallel_min_size(), a.size());
    const Mat2 m = Gate::ry(0.3).matrix();
    kernels::apply_1q(a, 2, m);
    kernels::serial::apply_1q(b, 2, m);
    EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace qnbm
