#include <gtest/gtest.h>

#include <random>

#include "qnbm/models.hpp"
#include "qnbm/oracle.hpp"
#include "test_helpers.hpp"

namespace qnbm {
namespace {

using testing::max_abs_diff;

struct TableRow {
    QnbmTopology topology;
    std::size_t p_num;
    unsigned n_qubits;
};

// Every row of the network-design table: (topology, P_num, N_qubits).
const std::vector<TableRow> kTableRows = {
    {{1, 0, 2}, 4, 4},   {{1, 1, 2}, 6, 5},   {{2, 0, 2}, 6, 5},   {{1, 0, 3}, 6, 5},   {{1, 1, 3}, 8, 6},
    {{1, 2, 3}, 13, 7},  {{2, 0, 3}, 9, 6},   {{2, 1, 3}, 9, 7},   {{2, 2, 3}, 15, 8},  {{3, 0, 3}, 12, 7},
    {{1, 0, 4}, 8, 6},   {{1, 1, 4}, 10, 7},  {{1, 2, 4}, 16, 8},  {{1, 3, 4}, 22, 9},  {{2, 0, 4}, 12, 7},
    {{2, 1, 4}, 11, 8},  {{2, 2, 4}, 18, 9},  {{2, 3, 4}, 25, 10}, {{3, 0, 4}, 16, 8},  {{3, 1, 4}, 12, 9},
    {{3, 2, 4}, 20, 10}, {{3, 3, 4}, 28, 11}, {{4, 0, 4}, 20, 9},
};

ParamVector random_params(std::mt19937_64& rng, std::size_t n, double r = 1.0) {
    std::uniform_real_distribution<double> u(-r, r);
    ParamVector p(n);
    for (double& x : p) x = u(rng);
    return p;
}

TEST(Topology, TableParamAndQubitCounts) {
    ASSERT_EQ(kTableRows.size(), 23u);
    for (const auto& row : kTableRows) {
        EXPECT_EQ(qnbm_param_count(row.topology), row.p_num) << row.topology.label();
        EXPECT_EQ(row.topology.qubit_count(), row.n_qubits) << row.topology.label();
    }
    EXPECT_EQ(qnbm_param_count({4, 0, 5}), 25u);
}

TEST(Topology, RejectsEmptyLayers) {
    EXPECT_THROW((QnbmTopology{0, 0, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((QnbmTopology{2, 0, 0}.validate()), std::invalid_argument);
    EXPECT_THROW(ModelSpec::qnbm({20, 3, 4}), std::invalid_argument);
}

TEST(QcbmConfigTest, ParamCounts) {
    EXPECT_EQ((QcbmConfig{5, 1}.param_count()), 20u);
    EXPECT_EQ((QcbmConfig{5, 2}.param_count()), 40u);
    EXPECT_EQ((QcbmConfig{2, 1}.param_count()), 5u);
    EXPECT_THROW((QcbmConfig{5, 0}.validate()), std::invalid_argument);
}

TEST(ParamLayout, InputMajorWeightsThenBiases) {
    // (2,0,3): weights w[i][j] at i*3 + j, then 3 biases.
    ParamVector p(9);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<double>(k);
    const auto neurons = qnbm_neurons({2, 0, 3}, p);
    ASSERT_EQ(neurons.size(), 3u);
    EXPECT_EQ(neurons[1].target, 3u);
    EXPECT_EQ(neurons[1].params.weights, (std::vector<double>{1.0, 4.0}));
    EXPECT_EQ(neurons[1].params.bias, 7.0);

    // (1,2,1): layer 1 = w(0->h0), w(0->h1), b_h0, b_h1; layer 2 = w(h0->o), w(h1->o), b_o.
    ParamVector q{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    const auto hid = qnbm_neurons({1, 2, 1}, q);
    ASSERT_EQ(hid.size(), 3u);
    EXPECT_EQ(hid[0].target, 1u);
    EXPECT_EQ(hid[0].params.bias, 0.3);
    EXPECT_EQ(hid[2].inputs, (std::vector<unsigned>{1, 2}));
    EXPECT_EQ(hid[2].params.weights, (std::vector<double>{0.5, 0.6}));
    EXPECT_EQ(hid[2].params.bias, 0.7);
}

TEST(QnbmDistribution, ZeroParamsGiveAllZerosPointMass) {
    for (const auto& row : kTableRows) {
        const auto out = qnbm_distribution(row.topology, ParamVector(row.p_num, 0.0));
        EXPECT_NEAR(out.dist.probs[0], 1.0, 1e-12);
        EXPECT_NEAR(out.acceptance_prob, 1.0, 1e-12);
    }
}

TEST(QnbmDistribution, MatchesProjectorOracle) {
    std::mt19937_64 rng(21);
    for (const QnbmTopology t : {QnbmTopology{1, 0, 2}, QnbmTopology{2, 1, 2}, QnbmTopology{2, 0, 3}}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = random_params(rng, t.param_count(), 1.5);
            const auto fast = qnbm_distribution(t, p);
            const auto ref = oracle::reference_distribution(oracle::qnbm_circuit(t, p));
            fast.dist.validate();
            EXPECT_LT(max_abs_diff(fast.dist, ref.dist), 1e-10) << t.label();
            EXPECT_NEAR(fast.acceptance_prob, ref.acceptance_prob, 1e-10) << t.label();
            EXPECT_GT(fast.acceptance_prob, 0.0);
            EXPECT_LE(fast.acceptance_prob, 1.0 + 1e-12);
        }
    }
}

TEST(QnbmDistribution, SmallParamsAcceptMostShots) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_params(rng, 6, 0.1);
        EXPECT_GE(qnbm_distribution({2, 0, 2}, p).acceptance_prob, 0.9);
    }
}

TEST(QnbmDistribution, RejectsWrongParamLength) {
    EXPECT_THROW(qnbm_distribution({1, 0, 2}, ParamVector(3)), std::invalid_argument);
}

TEST(LinearQnbm, ZeroParamsGiveAllZerosPointMass) {
    const auto d = linear_qnbm_distribution({4, 0, 5}, ParamVector(25, 0.0));
    EXPECT_NEAR(d.probs[0], 1.0, 1e-12);
}

TEST(LinearQnbm, MatchesOracle) {
    std::mt19937_64 rng(23);
    for (const QnbmTopology t : {QnbmTopology{1, 0, 2}, QnbmTopology{2, 2, 2}}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = random_params(rng, t.param_count());
            const auto ref = oracle::reference_distribution(oracle::linear_qnbm_circuit(t, p));
            EXPECT_LT(max_abs_diff(linear_qnbm_distribution(t, p), ref.dist), 1e-10);
            EXPECT_EQ(ref.acceptance_prob, 1.0);
        }
    }
}

TEST(Qcbm, ZeroParamsGiveAllZerosPointMass) {
    const auto d = qcbm_distribution({5, 1}, ParamVector(20, 0.0));
    EXPECT_NEAR(d.probs[0], 1.0, 1e-12);
}

TEST(Qcbm, MatchesOracle) {
    std::mt19937_64 rng(24);
    for (const QcbmConfig c : {QcbmConfig{2, 1}, QcbmConfig{3, 2}, QcbmConfig{5, 1}}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = random_params(rng, c.param_count(), 3.14);
            const auto ref = oracle::reference_distribution(oracle::qcbm_circuit(c, p));
            EXPECT_LT(max_abs_diff(qcbm_distribution(c, p), ref.dist), 1e-10);
        }
    }
}

TEST(ModelProperties, AllEvaluatorsReturnValidDistributions) {
    std::mt19937_64 rng(25);
    const std::vector<ModelSpec> models = {ModelSpec::qnbm({2, 1, 3}), ModelSpec::linear_qnbm({2, 1, 3}),
                                           ModelSpec::qcbm({4, 2})};
    for (const auto& m : models) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto p = random_params(rng, m.param_count(), m.init_range());
            double acc = 0.0;
            const ProbDist d = m.evaluate(p, &acc);
            EXPECT_NO_THROW(d.validate(1e-10)) << m.name();
            EXPECT_EQ(d.n_bits, m.output_bits());
            EXPECT_GT(acc, 0.0);
        }
    }
}

TEST(ModelProperties, EvaluationIsBitIdentical) {
    std::mt19937_64 rng(26);
    const auto m = ModelSpec::qnbm({3, 2, 4});
    const auto p = random_params(rng, m.param_count());
    EXPECT_EQ(m.evaluate(p).probs, m.evaluate(p).probs);
}

TEST(ModelSpecTest, NamesAndCounts) {
    EXPECT_EQ(ModelSpec::qnbm({4, 0, 5}).name(), "qnbm_4-0-5");
    EXPECT_EQ(ModelSpec::linear_qnbm({4, 0, 5}).name(), "linear_qnbm_4-0-5");
    EXPECT_EQ(ModelSpec::qcbm({5, 2}).name(), "qcbm_5x2");
    EXPECT_EQ(ModelSpec::qnbm({4, 0, 5}).qubit_count(), 10u);
    EXPECT_EQ(ModelSpec::linear_qnbm({4, 0, 5}).qubit_count(), 9u);
    EXPECT_EQ(ModelSpec::qcbm({5, 2}).param_count(), 40u);
}

}  // namespace
}  // namespace qnbm
