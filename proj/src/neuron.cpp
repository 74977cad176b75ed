#include "qnbm/neuron.hpp"

#include <cmath>
#include <stdexcept>

namespace qnbm::neuron {

namespace {

void check_distinct(std::span<const unsigned> inputs, unsigned target, unsigned ancilla, bool with_ancilla) {
    std::uint64_t seen = std::uint64_t{1} << target;
    if (with_ancilla) {
        if (ancilla == target) throw std::invalid_argument("ancilla and target coincide");
        seen |= std::uint64_t{1} << ancilla;
    }
    for (unsigned q : inputs) {
        if (q >= 64 || (seen & (std::uint64_t{1} << q))) {
            throw std::invalid_argument("neuron qubit indices must be distinct");
        }
        seen |= std::uint64_t{1} << q;
    }
}

}  // namespace

double activation(double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return std::atan2(s * s, c * c);
}

double success_probability(double theta) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = std::cos(theta) * std::cos(theta);
    return c2 * c2 + s2 * s2;
}

double NeuronParams::theta(std::size_t x) const {
    double t = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if ((x >> i) & 1U) t += weights[i];
    }
    return t;
}

void apply_neuron_block(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                        unsigned target, unsigned ancilla, const NeuronCircuit& circuit) {
    if (params.weights.size() != inputs.size()) {
        throw std::invalid_argument("neuron weight count does not match its input count");
    }
    check_distinct(inputs, target, ancilla, true);

    state.apply(Gate::ry(2 * params.bias), ancilla);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        state.apply_controlled(Gate::ry(2 * params.weights[i]), inputs[i], ancilla);
    }
    state.apply_controlled(Gate::ry(circuit.controlled_angle), ancilla, target);
    for (std::size_t i = inputs.size(); i-- > 0;) {
        state.apply_controlled(Gate::ry(-2 * params.weights[i]), inputs[i], ancilla);
    }
    state.apply(Gate::ry(-2 * params.bias), ancilla);
}

double apply_quantum_neuron(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                            unsigned target, unsigned ancilla, const NeuronCircuit& circuit) {
    apply_neuron_block(state, inputs, params, target, ancilla, circuit);
    return state.project_qubit(ancilla, 0);
}

void apply_linear_neuron(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                         unsigned target) {
    if (params.weights.size() != inputs.size()) {
        throw std::invalid_argument("neuron weight count does not match its input count");
    }
    check_distinct(inputs, target, 0, false);

    state.apply(Gate::ry(2 * params.bias), target);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        state.apply_controlled(Gate::ry(2 * params.weights[i]), inputs[i], target);
    }
}

Mat2 branch_operator(double theta, unsigned ancilla_outcome, const NeuronCircuit& circuit) {
    if (ancilla_outcome > 1) throw std::invalid_argument("ancilla outcome must be 0 or 1");
    constexpr unsigned target = 0;
    constexpr unsigned ancilla = 1;
    const NeuronParams bias_only{{}, theta};
    Mat2 m{};
    for (unsigned column = 0; column < 2; ++column) {
        Statevector sv(2);
        if (column == 1) sv.apply(Gate::x(), target);
        apply_neuron_block(sv, {}, bias_only, target, ancilla, circuit);
        const std::size_t row_base = std::size_t{ancilla_outcome} << ancilla;
        m[0 * 2 + column] = sv[row_base | 0];
        m[1 * 2 + column] = sv[row_base | 1];
    }
    return m;
}

Mat2 recovery_rotation() { return Gate::ry(std::numbers::pi / 2).matrix(); }

}  // namespace qnbm::neuron
