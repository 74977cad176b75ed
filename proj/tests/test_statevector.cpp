#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qnbm/neuron.hpp"
#include "qnbm/oracle.hpp"
#include "qnbm/statevector.hpp"
#include "test_helpers.hpp"

namespace qnbm {
namespace {

using std::numbers::pi;
using testing::max_abs_diff;

TEST(NewZero, BasisStateZero) {
    Statevector one(1);
    EXPECT_EQ(one.size(), 2u);
    EXPECT_EQ(one[0], Complex(1.0));
    EXPECT_EQ(one[1], Complex(0.0));

    Statevector three(3);
    EXPECT_EQ(three.size(), 8u);
    EXPECT_EQ(three[0], Complex(1.0));

    EXPECT_EQ(Statevector(11).size(), 2048u);
}

TEST(NewZero, RejectsOutOfRangeSizes) {
    EXPECT_THROW(Statevector(0), std::out_of_range);
    EXPECT_THROW(Statevector(25), std::out_of_range);
}

TEST(Apply1q, HadamardOnZero) {
    Statevector sv(1);
    sv.apply(Gate::h(), 0);
    EXPECT_NEAR(sv[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(sv[1].real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Apply1q, RyPiFlipsZeroToOne) {
    Statevector sv(1);
    sv.apply(Gate::ry(pi), 0);
    EXPECT_NEAR(std::abs(sv[0]), 0.0, 1e-15);
    EXPECT_NEAR(sv[1].real(), 1.0, 1e-15);
}

TEST(Apply1q, RyByTwiceActivation) {
    // q(0.7) = arctan(tan^2 0.7) at 50 digits.
    constexpr double q07 = 0.61703994062461367046170104680545379429343348243072;
    EXPECT_NEAR(neuron::activation(0.7), q07, 1e-15);
    Statevector sv(1);
    sv.apply(Gate::ry(2 * neuron::activation(0.7)), 0);
    EXPECT_NEAR(sv[0].real(), 0.81559478714612026519, 1e-14);
    EXPECT_NEAR(sv[1].real(), 0.57862349000025463695, 1e-14);
}

TEST(Apply1q, RejectsBadQubit) {
    Statevector sv(2);
    EXPECT_THROW(sv.apply(Gate::x(), 2), std::out_of_range);
}

TEST(ApplyControlled, InactiveControlLeavesStateUnchanged) {
    Statevector sv(2);
    sv.apply_controlled(Gate::ry(1.234), 0, 1);
    EXPECT_EQ(sv[0], Complex(1.0));
    EXPECT_NEAR(sv.norm_squared(), 1.0, 1e-15);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(sv[i], Complex(0.0));
}

TEST(ApplyControlled, ActiveControlRotatesTarget) {
    Statevector sv(2);
    sv.apply(Gate::x(), 0);
    sv.apply_controlled(Gate::ry(pi), 0, 1);
    EXPECT_NEAR(sv[0b11].real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(sv[0b01]), 0.0, 1e-15);
}

TEST(ApplyControlled, SuperposedControlMatchesDenseOracle) {
    // (|00> + |10>)/sqrt2 in big-endian labels: qubit 1 superposed, qubit 0 is 0.
    Statevector sv(2);
    sv.apply(Gate::h(), 1);
    sv.apply_controlled(Gate::ry(2 * 0.8), 1, 0);

    oracle::Circuit c{2, {oracle::GateOp{oracle::GateKind::H, 0, {1}, {}},
                          oracle::GateOp{oracle::GateKind::RY, 1.6, {0}, {1}}}, {}};
    const auto ref = oracle::reference_distribution(c);
    EXPECT_LT(max_abs_diff(sv, ref.state), 1e-12);
}

TEST(ApplyControlled, RejectsCollisionsAndUnsupportedGates) {
    Statevector sv(3);
    EXPECT_THROW(sv.apply_controlled(Gate::ry(1.0), 1, 1), std::invalid_argument);
    EXPECT_THROW(sv.apply_controlled(Gate::ry(1.0), 0, 3), std::out_of_range);
    EXPECT_THROW(sv.apply_controlled(Gate::h(), 0, 1), std::invalid_argument);
}

TEST(ApplyXx, ZeroAngleIsIdentity) {
    std::mt19937_64 rng(1);
    Statevector sv = testing::random_state(rng, 3);
    const Statevector before = sv;
    sv.apply_xx(0, 2, 0.0);
    for (std::size_t i = 0; i < sv.size(); ++i) EXPECT_EQ(sv[i], before[i]);
}

TEST(ApplyXx, PiMapsZeroZeroToMinusIOneOne) {
    Statevector sv(2);
    sv.apply_xx(0, 1, pi);
    EXPECT_NEAR(std::abs(sv[0]), 0.0, 1e-15);
    EXPECT_NEAR(sv[3].real(), 0.0, 1e-15);
    EXPECT_NEAR(sv[3].imag(), -1.0, 1e-15);
}

TEST(ApplyXx, GeneralAngleOnZeroZero) {
    const double phi = 0.9;
    Statevector sv(2);
    sv.apply_xx(1, 0, phi);
    EXPECT_NEAR(sv[0].real(), std::cos(phi / 2), 1e-15);
    EXPECT_NEAR(sv[3].imag(), -std::sin(phi / 2), 1e-15);

    oracle::Circuit c{2, {oracle::GateOp{oracle::GateKind::XX, phi, {0, 1}, {}}}, {}};
    EXPECT_LT(max_abs_diff(sv, oracle::reference_distribution(c).state), 1e-14);
}

TEST(ApplyXx, RejectsCollisions) {
    Statevector sv(2);
    EXPECT_THROW(sv.apply_xx(1, 1, 0.3), std::invalid_argument);
    EXPECT_THROW(sv.apply_xx(0, 5, 0.3), std::out_of_range);
}

TEST(ProjectQubit, CertainOutcome) {
    Statevector sv(1);
    EXPECT_DOUBLE_EQ(sv.project_qubit(0, 0), 1.0);
    EXPECT_EQ(sv[0], Complex(1.0));
}

TEST(ProjectQubit, HalfProbabilityCollapsesToZero) {
    Statevector sv(1);
    sv.apply(Gate::h(), 0);
    EXPECT_NEAR(sv.project_qubit(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(sv[0].real(), 1.0, 1e-15);
    EXPECT_EQ(sv[1], Complex(0.0));
}

TEST(ProjectQubit, NeuronAncillaAtQuarterPi) {
    // target 0, ancilla 1; bias-only neuron with theta = pi/4.
    Statevector sv(2);
    neuron::apply_neuron_block(sv, {}, {{}, pi / 4}, 0, 1);
    EXPECT_NEAR(sv.project_qubit(1, 0), 0.5, 1e-12);
}

TEST(ProjectQubit, ImpossibleBranchZeroesState) {
    Statevector sv(2);
    try {
        sv.project_qubit(1, 1);
        FAIL() << "expected ImpossibleBranch";
    } catch (const ImpossibleBranch& e) {
        EXPECT_EQ(e.qubit(), 1u);
        EXPECT_EQ(e.outcome(), 1u);
        EXPECT_LT(e.probability(), 1e-14);
    }
    EXPECT_EQ(sv.norm_squared(), 0.0);
}

TEST(ProjectQubit, OutcomeProbabilitiesSumToOne) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 6);
        const Statevector sv = testing::random_state(rng, n);
        const unsigned q = static_cast<unsigned>(rng() % n);
        EXPECT_NEAR(sv.outcome_probability(q, 0) + sv.outcome_probability(q, 1), 1.0, 1e-12);
    }
}

TEST(ProjectQubit, MarginalAfterProjectionIsPointMass) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % 5);
        Statevector sv = testing::random_state(rng, n);
        const unsigned q = static_cast<unsigned>(rng() % n);
        const unsigned outcome = static_cast<unsigned>(rng() % 2);
        sv.project_qubit(q, outcome);
        const unsigned measured[] = {q};
        const ProbDist d = sv.marginal_distribution(measured);
        EXPECT_NEAR(d.probs[outcome], 1.0, 1e-12);
        EXPECT_NEAR(d.probs[1 - outcome], 0.0, 1e-12);
        EXPECT_NEAR(sv.norm_squared(), 1.0, 1e-10);
    }
}

TEST(Marginal, PointMassOnBasisState) {
    Statevector sv(2);
    sv.apply(Gate::x(), 0);  // qubit 0 = 1, qubit 1 = 0
    const unsigned all[] = {0, 1};
    const ProbDist d = sv.marginal_distribution(all);
    EXPECT_EQ(d.n_bits, 2u);
    EXPECT_DOUBLE_EQ(d.probs[0b01], 1.0);
    EXPECT_EQ(bitstring(0b01, 2), "10");
}

TEST(Marginal, BellStateSingleQubitIsUniform) {
    Statevector sv(2);
    sv.apply(Gate::h(), 0);
    sv.apply_controlled(Gate::x(), 0, 1);
    const unsigned one[] = {0};
    const ProbDist d = sv.marginal_distribution(one);
    EXPECT_NEAR(d.probs[0], 0.5, 1e-15);
    EXPECT_NEAR(d.probs[1], 0.5, 1e-15);
}

TEST(Marginal, RespectsListedOrder) {
    Statevector sv(3);
    sv.apply(Gate::x(), 2);
    const unsigned order[] = {2, 0};
    const ProbDist d = sv.marginal_distribution(order);
    EXPECT_DOUBLE_EQ(d.probs[0b01], 1.0);
}

TEST(Marginal, RejectsDuplicatesAndOutOfRange) {
    Statevector sv(3);
    const unsigned dup[] = {1, 1};
    const unsigned bad[] = {3};
    EXPECT_THROW(sv.marginal_distribution(dup), std::invalid_argument);
    EXPECT_THROW(sv.marginal_distribution(bad), std::out_of_range);
}

// Random gate sequences on random states against dense-matrix application.
TEST(StatevectorProperties, UnitaryOpsMatchOracleAndPreserveNorm) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % 5);
        Statevector sv = testing::random_state(rng, n);
        oracle::DenseState ref = testing::to_dense(sv);

        const unsigned a = static_cast<unsigned>(rng() % n);
        unsigned b = static_cast<unsigned>(rng() % n);
        if (b == a) b = (a + 1) % n;
        const double phi = angle(rng);

        oracle::GateOp op;
        switch (rng() % 7) {
            case 0: sv.apply(Gate::h(), a); op = {oracle::GateKind::H, 0, {a}, {}}; break;
            case 1: sv.apply(Gate::x(), a); op = {oracle::GateKind::X, 0, {a}, {}}; break;
            case 2: sv.apply(Gate::rx(phi), a); op = {oracle::GateKind::RX, phi, {a}, {}}; break;
            case 3: sv.apply(Gate::ry(phi), a); op = {oracle::GateKind::RY, phi, {a}, {}}; break;
            case 4: sv.apply(Gate::rz(phi), a); op = {oracle::GateKind::RZ, phi, {a}, {}}; break;
            case 5: sv.apply_controlled(Gate::ry(phi), a, b); op = {oracle::GateKind::RY, phi, {b}, {a}}; break;
            default: sv.apply_xx(a, b, phi); op = {oracle::GateKind::XX, phi, {a, b}, {}}; break;
        }
        ref = oracle::embed_gate(op, n) * ref;
        EXPECT_LT(max_abs_diff(sv, ref), 1e-10);
        EXPECT_NEAR(sv.norm_squared(), 1.0, 1e-10);
    }
}

TEST(Sample, PointMassTakesEveryDraw) {
    ProbDist d{2, {0.0, 0.0, 1.0, 0.0}};
    const auto counts = sample(d, 100, 9);
    EXPECT_EQ(counts[2], 100u);
}

TEST(Sample, UniformCountsWithinFiveSigma) {
    ProbDist d{2, {0.25, 0.25, 0.25, 0.25}};
    const std::uint64_t n = 1'000'000;
    const auto counts = sample(d, n, 2024);
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    std::uint64_t total = 0;
    for (auto c : counts) {
        EXPECT_LT(std::abs(static_cast<double>(c) - 250000.0), 5 * sigma);
        total += c;
    }
    EXPECT_EQ(total, n);
}

TEST(Sample, DeterministicForSeed) {
    ProbDist d{3, {0.1, 0.2, 0.05, 0.15, 0.1, 0.1, 0.2, 0.1}};
    EXPECT_EQ(sample(d, 5000, 77), sample(d, 5000, 77));
    EXPECT_NE(sample(d, 5000, 77), sample(d, 5000, 78));
}

TEST(Sample, NeverDrawsZeroProbabilityOutcomes) {
    ProbDist d{3, {0.0, 1.0 / 3, 0.0, 1.0 / 3, 0.0, 1.0 / 3, 0.0, 0.0}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto counts = sample(d, 999, seed);
        EXPECT_EQ(counts[0] + counts[2] + counts[4] + counts[6] + counts[7], 0u);
    }
}

TEST(Sample, RejectsInvalidInput) {
    EXPECT_THROW(sample(ProbDist{1, {0.7, 0.7}}, 10, 0), std::invalid_argument);
    EXPECT_THROW(sample(ProbDist{1, {0.5, 0.5}}, 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace qnbm
