#include "qnbm/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnbm::oracle {

namespace {

using Mat2 = Eigen::Matrix2cd;

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// factors[q] acts on qubit q; qubit 0 is the least significant index bit, so
// it is the rightmost Kronecker factor.
DenseOperator tensor(const std::vector<Mat2>& factors) {
    DenseOperator out = DenseOperator::Identity(1, 1);
    for (std::size_t q = factors.size(); q-- > 0;) out = kron(out, factors[q]);
    return out;
}

Mat2 ket_bra(unsigned b) {
    Mat2 p = Mat2::Zero();
    p(b, b) = 1.0;
    return p;
}

void check_size(unsigned n) {
    if (n < 1 || n > kMaxOracleQubits) throw std::invalid_argument("oracle supports 1..8 qubits");
}

void check_index(unsigned q, unsigned n) {
    if (q >= n) throw std::out_of_range("oracle qubit index out of range");
}

}  // namespace

Eigen::Matrix2cd gate_matrix(GateKind kind, double angle) {
    using C = std::complex<double>;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    Mat2 m;
    switch (kind) {
        case GateKind::H:
            m << 1.0, 1.0, 1.0, -1.0;
            return m / std::numbers::sqrt2;
        case GateKind::X:
            m << 0.0, 1.0, 1.0, 0.0;
            return m;
        case GateKind::RX:
            m << c, C(0, -s), C(0, -s), c;
            return m;
        case GateKind::RY:
            m << c, -s, s, c;
            return m;
        case GateKind::RZ:
            m << std::exp(C(0, -angle / 2)), 0.0, 0.0, std::exp(C(0, angle / 2));
            return m;
        case GateKind::XX:
            break;
    }
    throw std::invalid_argument("gate kind has no 2x2 matrix");
}

DenseOperator embed_gate(const GateOp& gate, unsigned n) {
    check_size(n);
    const std::size_t want_targets = gate.kind == GateKind::XX ? 2 : 1;
    if (gate.targets.size() != want_targets) throw std::invalid_argument("wrong number of gate targets");
    std::uint32_t used = 0;
    for (unsigned q : gate.targets) {
        check_index(q, n);
        if (used & (1U << q)) throw std::invalid_argument("repeated qubit in gate");
        used |= 1U << q;
    }
    for (unsigned q : gate.controls) {
        check_index(q, n);
        if (used & (1U << q)) throw std::invalid_argument("repeated qubit in gate");
        used |= 1U << q;
    }

    // Active block: |1><1| on every control.
    std::vector<Mat2> active(n, Mat2::Identity());
    for (unsigned q : gate.controls) active[q] = ket_bra(1);

    DenseOperator on_active;
    if (gate.kind == GateKind::XX) {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        std::vector<Mat2> xx = active;
        xx[gate.targets[0]] = gate_matrix(GateKind::X, 0.0);
        xx[gate.targets[1]] = gate_matrix(GateKind::X, 0.0);
        on_active = c * tensor(active) + std::complex<double>(0, -s) * tensor(xx);
    } else {
        std::vector<Mat2> g = active;
        g[gate.targets[0]] = gate_matrix(gate.kind, gate.angle);
        on_active = tensor(g);
    }
    const auto dim = Eigen::Index{1} << n;
    if (gate.controls.empty()) return on_active;
    return DenseOperator::Identity(dim, dim) - tensor(active) + on_active;
}

DenseOperator projector(unsigned qubit, unsigned outcome, unsigned n) {
    check_size(n);
    check_index(qubit, n);
    std::vector<Mat2> f(n, Mat2::Identity());
    f[qubit] = ket_bra(outcome);
    return tensor(f);
}

Reference reference_distribution(const Circuit& circuit) {
    const unsigned n = circuit.n_qubits;
    check_size(n);
    const auto dim = Eigen::Index{1} << n;
    Reference ref;
    ref.state = DenseState::Zero(dim);
    ref.state(0) = 1.0;

    for (const Step& step : circuit.steps) {
        if (const auto* g = std::get_if<GateOp>(&step)) {
            ref.state = embed_gate(*g, n) * ref.state;
        } else {
            const auto& p = std::get<ProjectOp>(step);
            const DenseState kept = projector(p.qubit, p.outcome, n) * ref.state;
            const double prob = kept.squaredNorm();
            if (prob < kImpossibleBranchThreshold) throw ImpossibleBranch(p.qubit, p.outcome, prob);
            ref.state = kept / std::sqrt(prob);
            ref.acceptance_prob *= prob;
        }
    }

    std::vector<unsigned> measured = circuit.measured;
    if (measured.empty()) {
        for (unsigned q = 0; q < n; ++q) measured.push_back(q);
    }
    ref.dist.n_bits = static_cast<unsigned>(measured.size());
    ref.dist.probs.assign(std::size_t{1} << measured.size(), 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        std::size_t y = 0;
        for (std::size_t k = 0; k < measured.size(); ++k) {
            if ((i >> measured[k]) & 1) y |= std::size_t{1} << k;
        }
        ref.dist.probs[y] += std::norm(ref.state(i));
    }
    return ref;
}

namespace {

struct Layer {
    std::vector<unsigned> sources;
    std::vector<unsigned> targets;
};

std::vector<Layer> layers_of(const QnbmTopology& t) {
    std::vector<unsigned> in;
    std::vector<unsigned> hid;
    std::vector<unsigned> out;
    for (unsigned i = 0; i < t.n_in; ++i) in.push_back(i);
    for (unsigned i = 0; i < t.n_hid; ++i) hid.push_back(t.n_in + i);
    for (unsigned i = 0; i < t.n_out; ++i) out.push_back(t.n_in + t.n_hid + i);
    if (t.n_hid == 0) return {{in, out}};
    return {{in, hid}, {hid, out}};
}

// Calls emit(sources, target, weights, bias) for each neuron in layout order.
template <class Emit>
void for_each_neuron(const QnbmTopology& t, std::span<const double> params, Emit emit) {
    if (params.size() != t.param_count()) throw std::invalid_argument("oracle: parameter length mismatch");
    std::size_t offset = 0;
    for (const Layer& layer : layers_of(t)) {
        const std::size_t ns = layer.sources.size();
        const std::size_t nt = layer.targets.size();
        for (std::size_t j = 0; j < nt; ++j) {
            std::vector<double> w(ns);
            for (std::size_t i = 0; i < ns; ++i) w[i] = params[offset + i * nt + j];
            emit(layer.sources, layer.targets[j], w, params[offset + ns * nt + j]);
        }
        offset += ns * nt + nt;
    }
}

}  // namespace

Circuit qnbm_circuit(const QnbmTopology& t, std::span<const double> params) {
    Circuit c;
    c.n_qubits = t.n_in + t.n_hid + t.n_out + 1;
    const unsigned anc = c.n_qubits - 1;
    for (unsigned i = 0; i < t.n_in; ++i) c.steps.emplace_back(GateOp{GateKind::H, 0.0, {i}, {}});
    for_each_neuron(t, params, [&](const std::vector<unsigned>& src, unsigned tgt, const std::vector<double>& w,
                                   double b) {
        c.steps.emplace_back(GateOp{GateKind::RY, 2 * b, {anc}, {}});
        for (std::size_t i = 0; i < src.size(); ++i) {
            c.steps.emplace_back(GateOp{GateKind::RY, 2 * w[i], {anc}, {src[i]}});
        }
        c.steps.emplace_back(GateOp{GateKind::RY, std::numbers::pi, {tgt}, {anc}});
        for (std::size_t i = src.size(); i-- > 0;) {
            c.steps.emplace_back(GateOp{GateKind::RY, -2 * w[i], {anc}, {src[i]}});
        }
        c.steps.emplace_back(GateOp{GateKind::RY, -2 * b, {anc}, {}});
        c.steps.emplace_back(ProjectOp{anc, 0});
    });
    for (unsigned k = 0; k < t.n_out; ++k) c.measured.push_back(t.n_in + t.n_hid + k);
    return c;
}

Circuit linear_qnbm_circuit(const QnbmTopology& t, std::span<const double> params) {
    Circuit c;
    c.n_qubits = t.n_in + t.n_hid + t.n_out;
    for (unsigned i = 0; i < t.n_in; ++i) c.steps.emplace_back(GateOp{GateKind::H, 0.0, {i}, {}});
    for_each_neuron(t, params, [&](const std::vector<unsigned>& src, unsigned tgt, const std::vector<double>& w,
                                   double b) {
        c.steps.emplace_back(GateOp{GateKind::RY, 2 * b, {tgt}, {}});
        for (std::size_t i = 0; i < src.size(); ++i) {
            c.steps.emplace_back(GateOp{GateKind::RY, 2 * w[i], {tgt}, {src[i]}});
        }
    });
    for (unsigned k = 0; k < t.n_out; ++k) c.measured.push_back(t.n_in + t.n_hid + k);
    return c;
}

Circuit qcbm_circuit(const QcbmConfig& cfg, std::span<const double> params) {
    if (params.size() != cfg.param_count()) throw std::invalid_argument("oracle: parameter length mismatch");
    Circuit c;
    c.n_qubits = cfg.n_qubits;
    const unsigned n = cfg.n_qubits;
    std::size_t k = 0;
    for (unsigned layer = 0; layer < cfg.layers; ++layer) {
        for (unsigned q = 0; q < n; ++q) c.steps.emplace_back(GateOp{GateKind::RX, params[k++], {q}, {}});
        for (unsigned q = 0; q < n; ++q) c.steps.emplace_back(GateOp{GateKind::RZ, params[k++], {q}, {}});
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) c.steps.emplace_back(GateOp{GateKind::XX, params[k++], {i, j}, {}});
        }
    }
    return c;
}

double unitarity_error(const DenseOperator& u) {
    const DenseOperator d = u.adjoint() * u - DenseOperator::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace qnbm::oracle
