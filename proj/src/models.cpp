#include "qnbm/models.hpp"

#include <numbers>
#include <stdexcept>

namespace qnbm {

namespace {

void check_length(std::span<const double> params, std::size_t expected) {
    if (params.size() != expected) {
        throw std::invalid_argument("parameter vector has length " + std::to_string(params.size()) + ", expected " +
                                    std::to_string(expected));
    }
}

// Appends the neurons of one fully connected layer. Weights are
// source-major starting at `offset`, followed by one bias per target.
std::size_t append_layer(std::vector<NeuronSlot>& out, std::span<const double> params, std::size_t offset,
                         const std::vector<unsigned>& sources, const std::vector<unsigned>& targets) {
    const std::size_t n_src = sources.size();
    const std::size_t n_tgt = targets.size();
    const std::size_t bias_offset = offset + n_src * n_tgt;
    for (std::size_t j = 0; j < n_tgt; ++j) {
        NeuronSlot slot{sources, targets[j], {std::vector<double>(n_src), params[bias_offset + j]}};
        for (std::size_t i = 0; i < n_src; ++i) slot.params.weights[i] = params[offset + i * n_tgt + j];
        out.push_back(std::move(slot));
    }
    return bias_offset + n_tgt;
}

std::vector<unsigned> qubit_range(unsigned first, unsigned count) {
    std::vector<unsigned> q(count);
    for (unsigned i = 0; i < count; ++i) q[i] = first + i;
    return q;
}

}  // namespace

void QnbmTopology::validate() const {
    if (n_in < 1 || n_out < 1) throw std::invalid_argument("QNBM needs at least one input and one output neuron");
    if (qubit_count() > kMaxQubits) throw std::invalid_argument("QNBM topology needs more than 24 qubits");
}

std::size_t QnbmTopology::param_count() const {
    if (n_hid == 0) return std::size_t{n_in} * n_out + n_out;
    return std::size_t{n_in} * n_hid + std::size_t{n_hid} * n_out + n_hid + n_out;
}

std::vector<unsigned> QnbmTopology::output_qubits() const { return qubit_range(output_qubit(0), n_out); }

std::string QnbmTopology::label() const {
    return std::to_string(n_in) + "-" + std::to_string(n_hid) + "-" + std::to_string(n_out);
}

void QcbmConfig::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("QCBM qubit count outside [1, 24]");
    if (layers < 1) throw std::invalid_argument("QCBM needs at least one layer");
}

std::size_t QcbmConfig::param_count() const {
    const std::size_t n = n_qubits;
    return (2 * n + n * (n - 1) / 2) * layers;
}

std::string QcbmConfig::label() const { return std::to_string(n_qubits) + "x" + std::to_string(layers); }

std::size_t qnbm_param_count(const QnbmTopology& topology) { return topology.param_count(); }

std::vector<NeuronSlot> qnbm_neurons(const QnbmTopology& t, std::span<const double> params) {
    t.validate();
    check_length(params, t.param_count());
    const auto inputs = qubit_range(t.input_qubit(0), t.n_in);
    const auto outputs = t.output_qubits();
    std::vector<NeuronSlot> neurons;
    neurons.reserve(t.n_hid + t.n_out);
    if (t.n_hid == 0) {
        append_layer(neurons, params, 0, inputs, outputs);
    } else {
        const auto hidden = qubit_range(t.hidden_qubit(0), t.n_hid);
        const std::size_t next = append_layer(neurons, params, 0, inputs, hidden);
        append_layer(neurons, params, next, hidden, outputs);
    }
    return neurons;
}

Statevector qnbm_state(const QnbmTopology& t, std::span<const double> params, double* acceptance) {
    const auto neurons = qnbm_neurons(t, params);
    Statevector sv(t.qubit_count());
    for (unsigned i = 0; i < t.n_in; ++i) sv.apply(Gate::h(), t.input_qubit(i));
    double accepted = 1.0;
    for (const auto& n : neurons) {
        accepted *= neuron::apply_quantum_neuron(sv, n.inputs, n.params, n.target, t.ancilla());
    }
    if (acceptance) *acceptance = accepted;
    return sv;
}

QnbmOutput qnbm_distribution(const QnbmTopology& t, std::span<const double> params) {
    QnbmOutput out;
    const Statevector sv = qnbm_state(t, params, &out.acceptance_prob);
    const auto measured = t.output_qubits();
    out.dist = sv.marginal_distribution(measured);
    return out;
}

Statevector linear_qnbm_state(const QnbmTopology& t, std::span<const double> params) {
    const auto neurons = qnbm_neurons(t, params);
    // No ancilla: the register stops at the last output qubit.
    Statevector sv(t.qubit_count() - 1);
    for (unsigned i = 0; i < t.n_in; ++i) sv.apply(Gate::h(), t.input_qubit(i));
    for (const auto& n : neurons) neuron::apply_linear_neuron(sv, n.inputs, n.params, n.target);
    return sv;
}

ProbDist linear_qnbm_distribution(const QnbmTopology& t, std::span<const double> params) {
    const Statevector sv = linear_qnbm_state(t, params);
    const auto measured = t.output_qubits();
    return sv.marginal_distribution(measured);
}

Statevector qcbm_state(const QcbmConfig& c, std::span<const double> params) {
    c.validate();
    check_length(params, c.param_count());
    const unsigned n = c.n_qubits;
    Statevector sv(n);
    std::size_t k = 0;
    for (unsigned layer = 0; layer < c.layers; ++layer) {
        for (unsigned q = 0; q < n; ++q) sv.apply(Gate::rx(params[k + q]), q);
        k += n;
        for (unsigned q = 0; q < n; ++q) sv.apply(Gate::rz(params[k + q]), q);
        k += n;
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) sv.apply_xx(i, j, params[k++]);
        }
    }
    return sv;
}

ProbDist qcbm_distribution(const QcbmConfig& c, std::span<const double> params) {
    return qcbm_state(c, params).distribution();
}

ModelSpec::ModelSpec(Variant v) : model_(std::move(v)) {
    std::visit(
        [](const auto& m) {
            if constexpr (requires { m.config; }) {
                m.config.validate();
            } else {
                m.topology.validate();
            }
        },
        model_);
}

std::string ModelSpec::kind() const {
    struct Visitor {
        std::string operator()(const QnbmModel&) const { return "qnbm"; }
        std::string operator()(const LinearQnbmModel&) const { return "linear_qnbm"; }
        std::string operator()(const QcbmModel&) const { return "qcbm"; }
    };
    return std::visit(Visitor{}, model_);
}

std::string ModelSpec::name() const {
    return std::visit(
        [this](const auto& m) {
            if constexpr (requires { m.config; }) {
                return kind() + "_" + m.config.label();
            } else {
                return kind() + "_" + m.topology.label();
            }
        },
        model_);
}

std::size_t ModelSpec::param_count() const {
    return std::visit(
        [](const auto& m) {
            if constexpr (requires { m.config; }) {
                return m.config.param_count();
            } else {
                return m.topology.param_count();
            }
        },
        model_);
}

unsigned ModelSpec::output_bits() const {
    return std::visit(
        [](const auto& m) {
            if constexpr (requires { m.config; }) {
                return m.config.n_qubits;
            } else {
                return m.topology.n_out;
            }
        },
        model_);
}

unsigned ModelSpec::qubit_count() const {
    struct Visitor {
        unsigned operator()(const QnbmModel& m) const { return m.topology.qubit_count(); }
        unsigned operator()(const LinearQnbmModel& m) const { return m.topology.qubit_count() - 1; }
        unsigned operator()(const QcbmModel& m) const { return m.config.n_qubits; }
    };
    return std::visit(Visitor{}, model_);
}

double ModelSpec::init_range() const {
    return std::holds_alternative<QcbmModel>(model_) ? std::numbers::pi : 1.0;
}

ProbDist ModelSpec::evaluate(std::span<const double> params, double* acceptance) const {
    struct Visitor {
        std::span<const double> params;
        double* acceptance;
        ProbDist operator()(const QnbmModel& m) const {
            auto out = qnbm_distribution(m.topology, params);
            if (acceptance) *acceptance = out.acceptance_prob;
            return std::move(out.dist);
        }
        ProbDist operator()(const LinearQnbmModel& m) const {
            if (acceptance) *acceptance = 1.0;
            return linear_qnbm_distribution(m.topology, params);
        }
        ProbDist operator()(const QcbmModel& m) const {
            if (acceptance) *acceptance = 1.0;
            return qcbm_distribution(m.config, params);
        }
    };
    return std::visit(Visitor{params, acceptance}, model_);
}

}  // namespace qnbm
