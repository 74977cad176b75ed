#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "qnbm/models.hpp"
#include "qnbm/statevector.hpp"

/// Dense-matrix reference simulator for tests.
///
/// Every gate is embedded as a full 2^n x 2^n operator built from Kronecker
/// products of 2x2 factors and control projectors, then multiplied onto the
/// state vector. Nothing here touches the in-place kernels.
namespace qnbm::oracle {

inline constexpr unsigned kMaxOracleQubits = 8;

using DenseOperator = Eigen::MatrixXcd;
using DenseState = Eigen::VectorXcd;

enum class GateKind { H, X, RX, RY, RZ, XX };

/// A gate with optional controls. XX uses targets = {q1, q2}; all other
/// kinds use a single target.
struct GateOp {
    GateKind kind;
    double angle = 0.0;
    std::vector<unsigned> targets;
    std::vector<unsigned> controls;
};

/// Project `qubit` onto `outcome` and renormalize.
struct ProjectOp {
    unsigned qubit;
    unsigned outcome = 0;
};

using Step = std::variant<GateOp, ProjectOp>;

struct Circuit {
    unsigned n_qubits = 1;
    std::vector<Step> steps;
    /// Output bit k corresponds to measured[k]; empty means all qubits.
    std::vector<unsigned> measured;
};

/// 2x2 matrix of a single-qubit gate kind, written out directly.
Eigen::Matrix2cd gate_matrix(GateKind kind, double angle);

/// Full-space operator for `gate`; n_qubits <= 8.
DenseOperator embed_gate(const GateOp& gate, unsigned n_qubits);

/// |outcome><outcome| on `qubit`, identity elsewhere.
DenseOperator projector(unsigned qubit, unsigned outcome, unsigned n_qubits);

struct Reference {
    ProbDist dist;
    double acceptance_prob = 1.0;
    DenseState state;
};

/// Runs the circuit from |0...0>; throws ImpossibleBranch on a projection
/// with norm^2 below 1e-14.
Reference reference_distribution(const Circuit& circuit);

/// Circuits mirroring the model constructors, derived from the parameter
/// layout independently of the fast evaluators.
Circuit qnbm_circuit(const QnbmTopology& topology, std::span<const double> params);
Circuit linear_qnbm_circuit(const QnbmTopology& topology, std::span<const double> params);
Circuit qcbm_circuit(const QcbmConfig& config, std::span<const double> params);

/// max |U^dagger U - I| over all entries.
double unitarity_error(const DenseOperator& u);

}  // namespace qnbm::oracle
