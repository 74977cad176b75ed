#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qnbm/targets.hpp"

namespace qnbm {
namespace {

ProbDist random_dist(std::mt19937_64& rng, unsigned n, double zero_fraction = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProbDist d{n, std::vector<double>(std::size_t{1} << n)};
    double s = 0.0;
    for (double& p : d.probs) {
        p = u(rng) < zero_fraction ? 0.0 : u(rng);
        s += p;
    }
    if (s == 0.0) {
        d.probs[0] = 1.0;
        s = 1.0;
    }
    for (double& p : d.probs) p /= s;
    return d;
}

TEST(BuildTarget, CardinalityFourTwo) {
    const ProbDist d = build_target(TargetSpec::constrained(4, 2));
    int valid = 0;
    for (std::size_t x = 0; x < d.size(); ++x) {
        if (d.probs[x] > 0) {
            ++valid;
            EXPECT_DOUBLE_EQ(d.probs[x], 1.0 / 6);
        }
    }
    EXPECT_EQ(valid, 6);
    EXPECT_NO_THROW(d.validate());
}

TEST(BuildTarget, CardinalityDefaultsToHalfTheBits) {
    const TargetSpec s = TargetSpec::constrained(5);
    EXPECT_EQ(s.effective_cardinality(), 2u);
    const ProbDist d = build_target(s);
    int valid = 0;
    for (double p : d.probs) valid += p > 0 ? 1 : 0;
    EXPECT_EQ(valid, 10);
    EXPECT_DOUBLE_EQ(d.probs[0b00011], 0.1);
    EXPECT_EQ(s.label(), "cardinality_5_2");
}

TEST(BuildTarget, UniformThreeBits) {
    const ProbDist d = build_target(TargetSpec::uniform(3));
    for (double p : d.probs) EXPECT_DOUBLE_EQ(p, 0.125);
}

TEST(BuildTarget, RejectsInvalidCardinality) {
    EXPECT_THROW(build_target(TargetSpec::constrained(3, 4)), std::invalid_argument);
    EXPECT_THROW(build_target(TargetSpec::uniform(0)), std::invalid_argument);
}

TEST(KlDivergence, SelfIsZero) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        const ProbDist p = random_dist(rng, 4, 0.3);
        EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-15);
    }
}

TEST(KlDivergence, CardinalityAgainstUniform) {
    const double kl = kl_divergence(build_target(TargetSpec::constrained(4, 2)), build_target(TargetSpec::uniform(4)));
    EXPECT_NEAR(kl, 0.98082925301172623686, 1e-14);  // ln(16/6)
}

TEST(KlDivergence, ClipsZeroModelProbabilities) {
    const ProbDist target = build_target(TargetSpec::uniform(2));
    const ProbDist model{2, {0.0, 1.0, 0.0, 0.0}};
    double brute = 0.0;
    for (std::size_t x = 0; x < 4; ++x) brute += 0.25 * std::log(0.25 / std::max(model.probs[x], 1e-16));
    EXPECT_NEAR(kl_divergence(target, model), brute, 1e-12);
    EXPECT_GT(kl_divergence(target, model), 25.0);
}

TEST(KlDivergence, RejectsDimensionMismatch) {
    EXPECT_THROW(kl_divergence(build_target(TargetSpec::uniform(2)), build_target(TargetSpec::uniform(3))),
                 std::invalid_argument);
}

TEST(KlDivergenceProperties, NonNegativeOnRandomPairs) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 200; ++i) {
        const ProbDist p = random_dist(rng, 3, 0.2);
        const ProbDist q = random_dist(rng, 3, 0.2);
        EXPECT_GE(kl_divergence(p, q), -1e-15);
    }
}

TEST(Precision, TargetModelHasFullPrecision) {
    const TargetSpec s = TargetSpec::constrained(4, 2);
    const ValidSet valid = [&](std::size_t x) { return s.is_valid(x); };
    EXPECT_NEAR(precision(build_target(s), valid), 1.0, 1e-15);
    EXPECT_NEAR(precision(build_target(TargetSpec::uniform(4)), valid), 0.375, 1e-15);
}

TEST(Precision, FromCounts) {
    const std::vector<std::uint64_t> counts{1, 3, 0, 6};
    EXPECT_DOUBLE_EQ(precision(counts, [](std::size_t x) { return x == 3; }), 0.6);
    EXPECT_THROW(precision(std::vector<std::uint64_t>{0, 0}, [](std::size_t) { return true; }),
                 std::invalid_argument);
}

TEST(PrecisionProperties, SampledConvergesToExact) {
    std::mt19937_64 rng(33);
    const TargetSpec s = TargetSpec::constrained(4, 2);
    const ValidSet valid = [&](std::size_t x) { return s.is_valid(x); };
    for (int i = 0; i < 50; ++i) {
        const ProbDist m = random_dist(rng, 4);
        const double exact = precision(m, valid);
        const double sampled = precision(sample(m, 10000, rng()), valid);
        EXPECT_LE(std::abs(sampled - exact), 5 * std::sqrt(exact * (1 - exact) / 1e4) + 1e-12);
    }
}

}  // namespace
}  // namespace qnbm
