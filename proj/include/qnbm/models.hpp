#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qnbm/neuron.hpp"
#include "qnbm/statevector.hpp"

namespace qnbm {

/// Flat model parameters. For a QNBM the layout is: layer-1 weights
/// (input-major: index = i * n_targets + j), layer-1 biases, layer-2 weights,
/// layer-2 biases. For a QCBM, per layer: all R_X angles, all R_Z angles,
/// then all XX angles over pairs i<j in lexicographic order.
using ParamVector = std::vector<double>;

/// Feed-forward network (n_in, n_hid, n_out); n_hid = 0 drops the hidden
/// layer. Qubits: inputs, then hidden, then outputs, then one shared ancilla.
struct QnbmTopology {
    unsigned n_in = 1;
    unsigned n_hid = 0;
    unsigned n_out = 1;

    void validate() const;
    unsigned qubit_count() const { return n_in + n_hid + n_out + 1; }
    std::size_t param_count() const;

    unsigned input_qubit(unsigned i) const { return i; }
    unsigned hidden_qubit(unsigned j) const { return n_in + j; }
    unsigned output_qubit(unsigned k) const { return n_in + n_hid + k; }
    unsigned ancilla() const { return n_in + n_hid + n_out; }
    std::vector<unsigned> output_qubits() const;

    /// "n_in-n_hid-n_out"
    std::string label() const;

    friend bool operator==(const QnbmTopology&, const QnbmTopology&) = default;
};

/// Hardware-efficient ansatz on n_qubits with `layers` repetitions.
struct QcbmConfig {
    unsigned n_qubits = 1;
    unsigned layers = 1;

    void validate() const;
    std::size_t param_count() const;
    /// "<n_qubits>x<layers>"
    std::string label() const;

    friend bool operator==(const QcbmConfig&, const QcbmConfig&) = default;
};

std::size_t qnbm_param_count(const QnbmTopology& topology);

/// One neuron's slice of a QNBM parameter vector.
struct NeuronSlot {
    std::vector<unsigned> inputs;
    unsigned target;
    neuron::NeuronParams params;
};

/// Neurons in evaluation order: hidden neurons by index, then output
/// neurons by index.
std::vector<NeuronSlot> qnbm_neurons(const QnbmTopology& topology, std::span<const double> params);

struct QnbmOutput {
    ProbDist dist;
    /// Product of all per-neuron success probabilities.
    double acceptance_prob = 1.0;
};

QnbmOutput qnbm_distribution(const QnbmTopology& topology, std::span<const double> params);
ProbDist linear_qnbm_distribution(const QnbmTopology& topology, std::span<const double> params);
ProbDist qcbm_distribution(const QcbmConfig& config, std::span<const double> params);

/// Final (pre-measurement) states, exposed for tests.
Statevector qnbm_state(const QnbmTopology& topology, std::span<const double> params, double* acceptance = nullptr);
Statevector linear_qnbm_state(const QnbmTopology& topology, std::span<const double> params);
Statevector qcbm_state(const QcbmConfig& config, std::span<const double> params);

struct QnbmModel {
    QnbmTopology topology;
};
struct LinearQnbmModel {
    QnbmTopology topology;
};
struct QcbmModel {
    QcbmConfig config;
};

/// Any of the three trainable Born machines.
class ModelSpec {
  public:
    using Variant = std::variant<QnbmModel, LinearQnbmModel, QcbmModel>;

    ModelSpec(Variant v);
    static ModelSpec qnbm(QnbmTopology t) { return ModelSpec(QnbmModel{t}); }
    static ModelSpec linear_qnbm(QnbmTopology t) { return ModelSpec(LinearQnbmModel{t}); }
    static ModelSpec qcbm(QcbmConfig c) { return ModelSpec(QcbmModel{c}); }

    const Variant& variant() const noexcept { return model_; }

    /// "qnbm", "linear_qnbm" or "qcbm".
    std::string kind() const;
    /// Kind plus shape, e.g. "qnbm_4-0-5" or "qcbm_5x1"; used in file names.
    std::string name() const;
    std::size_t param_count() const;
    unsigned output_bits() const;
    unsigned qubit_count() const;
    /// Half-width of the uniform initialization interval.
    double init_range() const;

    /// Exact output distribution; `acceptance` receives the post-selection
    /// acceptance probability (1 for models without mid-circuit measurement).
    ProbDist evaluate(std::span<const double> params, double* acceptance = nullptr) const;

  private:
    Variant model_;
};

}  // namespace qnbm
