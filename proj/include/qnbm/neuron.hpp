#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "qnbm/statevector.hpp"

namespace qnbm::neuron {

/// q(theta) = arctan(tan^2 theta), with the limit pi/2 at the poles of tan.
double activation(double theta);

/// cos^4 theta + sin^4 theta: probability that the ancilla reads 0 for a
/// basis-state input.
double success_probability(double theta);

struct NeuronParams {
    std::vector<double> weights;  // one per incoming neuron
    double bias = 0.0;

    /// theta = sum_i w_i x_i + b for a basis input; bit i of `x` is x_i.
    double theta(std::size_t x) const;
};

/// Gate choices of the repeat-until-success block. `controlled_angle` is the
/// angle of the ancilla-controlled R_Y on the target; pi gives the
/// controlled-(-iY) block whose failure branch is R_Y(-pi/2).
struct NeuronCircuit {
    double controlled_angle = std::numbers::pi;
};

/// Runs the quantum-neuron block and post-selects the ancilla on |0>.
///
/// Gate order: R_Y(2b) on the ancilla, controlled-R_Y(2 w_i) from each input
/// onto the ancilla, controlled-R_Y(pi) from the ancilla onto `target`, then
/// the ancilla rotations undone in reverse. The ancilla must hold |0> on
/// entry and holds |0> again on return. Returns the projection probability.
double apply_quantum_neuron(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                            unsigned target, unsigned ancilla, const NeuronCircuit& circuit = {});

/// The block without the final projection; both ancilla branches survive.
void apply_neuron_block(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                        unsigned target, unsigned ancilla, const NeuronCircuit& circuit = {});

/// Linear ablation: R_Y(2b) on `target`, then controlled-R_Y(2 w_i) from each
/// input onto `target`. No ancilla, no projection.
void apply_linear_neuron(Statevector& state, std::span<const unsigned> inputs, const NeuronParams& params,
                         unsigned target);

/// Unnormalized 2x2 operator the block applies to the target qubit when the
/// ancilla reads `ancilla_outcome`, for a bias-only neuron with angle theta.
/// Extracted by simulating the block on a two-qubit register.
Mat2 branch_operator(double theta, unsigned ancilla_outcome, const NeuronCircuit& circuit = {});

/// Target correction applied after a failed attempt: R_Y(pi/2).
Mat2 recovery_rotation();

}  // namespace qnbm::neuron
