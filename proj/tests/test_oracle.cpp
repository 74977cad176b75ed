#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qnbm/oracle.hpp"
#include "test_helpers.hpp"

namespace qnbm {
namespace {

using namespace oracle;
using std::numbers::pi;
using testing::max_abs_diff;

TEST(Oracle, XOnQubitOneOfTwo) {
    const DenseOperator u = embed_gate({GateKind::X, 0.0, {1}, {}}, 2);
    // |00> -> |10> in little-endian: index 0 -> index 2.
    EXPECT_EQ(u(2, 0), Complex(1.0, 0.0));
    EXPECT_EQ(u(0, 2), Complex(1.0, 0.0));
    EXPECT_EQ(u(3, 1), Complex(1.0, 0.0));
    EXPECT_EQ(u(0, 0), Complex(0.0, 0.0));
}

TEST(Oracle, ControlledXIsCnot) {
    const DenseOperator u = embed_gate({GateKind::X, 0.0, {1}, {0}}, 2);
    // control qubit 0 set: indices 1 <-> 3, 0 and 2 fixed.
    EXPECT_EQ(u(0, 0), Complex(1.0, 0.0));
    EXPECT_EQ(u(2, 2), Complex(1.0, 0.0));
    EXPECT_EQ(u(3, 1), Complex(1.0, 0.0));
    EXPECT_EQ(u(1, 3), Complex(1.0, 0.0));
    EXPECT_EQ(u(1, 1), Complex(0.0, 0.0));
}

TEST(Oracle, RandomControlledRotationsAreUnitary) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int trial = 0; trial < 20; ++trial) {
        for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
            const DenseOperator u = embed_gate({k, ang(rng), {2}, {0}}, 3);
            EXPECT_LT(unitarity_error(u), 1e-12);
        }
        EXPECT_LT(unitarity_error(embed_gate({GateKind::XX, ang(rng), {0, 2}, {}}, 3)), 1e-12);
    }
}

TEST(Oracle, ProjectorIsIdempotent) {
    const DenseOperator p = projector(1, 1, 3);
    EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(p.trace().real(), 4.0, 1e-15);
}

TEST(Oracle, EmptyCircuitIsPointMassAtZero) {
    const Reference r = reference_distribution({3, {}, {}});
    EXPECT_EQ(r.dist.probs[0], 1.0);
    EXPECT_EQ(r.acceptance_prob, 1.0);
}

TEST(Oracle, ImpossibleProjectionThrows) {
    EXPECT_THROW(reference_distribution({2, {ProjectOp{0, 1}}, {}}), ImpossibleBranch);
}

TEST(Oracle, RejectsTooManyQubits) {
    EXPECT_THROW(embed_gate({GateKind::H, 0.0, {0}, {}}, kMaxOracleQubits + 1), std::invalid_argument);
}

// Random circuits replayed on both the projector oracle and the fast engine.
TEST(OracleProperties, RandomCircuitsMatchFastEngine) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi);
    std::uniform_int_distribution<int> kind_pick(0, 7);
    for (int trial = 0; trial < 500; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % (kMaxOracleQubits - 1));
        std::uniform_int_distribution<unsigned> qpick(0, n - 1);
        Circuit c{n, {}, {}};
        Statevector sv(n);
        double acc = 1.0;
        const int depth = 5 + static_cast<int>(rng() % 20);
        for (int g = 0; g < depth; ++g) {
            const unsigned a = qpick(rng);
            unsigned b = qpick(rng);
            while (b == a) b = qpick(rng);
            const double phi = ang(rng);
            switch (kind_pick(rng)) {
                case 0:
                    c.steps.push_back(GateOp{GateKind::H, 0.0, {a}, {}});
                    sv.apply(Gate::h(), a);
                    break;
                case 1:
                    c.steps.push_back(GateOp{GateKind::RX, phi, {a}, {}});
                    sv.apply(Gate::rx(phi), a);
                    break;
                case 2:
                    c.steps.push_back(GateOp{GateKind::RY, phi, {a}, {}});
                    sv.apply(Gate::ry(phi), a);
                    break;
                case 3:
                    c.steps.push_back(GateOp{GateKind::RZ, phi, {a}, {}});
                    sv.apply(Gate::rz(phi), a);
                    break;
                case 4:
                    c.steps.push_back(GateOp{GateKind::RY, phi, {b}, {a}});
                    sv.apply_controlled(Gate::ry(phi), a, b);
                    break;
                case 5:
                    c.steps.push_back(GateOp{GateKind::X, 0.0, {b}, {a}});
                    sv.apply_controlled(Gate::x(), a, b);
                    break;
                case 6:
                    c.steps.push_back(GateOp{GateKind::XX, phi, {a, b}, {}});
                    sv.apply_xx(a, b, phi);
                    break;
                default: {
                    const unsigned outcome = static_cast<unsigned>(rng() & 1);
                    if (sv.outcome_probability(a, outcome) < 1e-3) break;
                    c.steps.push_back(ProjectOp{a, outcome});
                    acc *= sv.project_qubit(a, outcome);
                    break;
                }
            }
        }
        const Reference ref = reference_distribution(c);
        EXPECT_LT(max_abs_diff(sv, ref.state), 1e-10) << "trial " << trial;
        EXPECT_LT(max_abs_diff(sv.distribution(), ref.dist), 1e-10) << "trial " << trial;
        EXPECT_NEAR(acc, ref.acceptance_prob, 1e-10) << "trial " << trial;
    }
}

}  // namespace
}  // namespace qnbm
