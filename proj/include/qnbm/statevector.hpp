#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnbm/kernels.hpp"

namespace qnbm {

/// Raised when a projection hits a branch whose probability is below
/// `kImpossibleBranchThreshold`. The projected state is left zeroed.
class ImpossibleBranch : public std::runtime_error {
  public:
    ImpossibleBranch(unsigned qubit, unsigned outcome, double probability);

    unsigned qubit() const noexcept { return qubit_; }
    unsigned outcome() const noexcept { return outcome_; }
    double probability() const noexcept { return probability_; }

  private:
    unsigned qubit_;
    unsigned outcome_;
    double probability_;
};

inline constexpr double kImpossibleBranchThreshold = 1e-14;
inline constexpr unsigned kMaxQubits = 24;

/// Single-qubit gate. Rotations follow R_P(phi) = exp(-i phi P / 2).
struct Gate {
    enum class Kind { H, X, RX, RY, RZ };

    Kind kind;
    double angle = 0.0;

    static Gate h() { return {Kind::H}; }
    static Gate x() { return {Kind::X}; }
    static Gate rx(double phi) { return {Kind::RX, phi}; }
    static Gate ry(double phi) { return {Kind::RY, phi}; }
    static Gate rz(double phi) { return {Kind::RZ, phi}; }

    Mat2 matrix() const;
};

/// Dense probability vector over 2^n_bits outcomes. Bit k of an index is
/// output bit k.
struct ProbDist {
    unsigned n_bits = 0;
    std::vector<double> probs;

    std::size_t size() const noexcept { return probs.size(); }
    double operator[](std::size_t x) const { return probs[x]; }

    /// Throws std::invalid_argument unless entries are >= 0, the length is
    /// 2^n_bits and the sum is 1 within `tol`.
    void validate(double tol = 1e-10) const;
};

/// Amplitudes over n qubits; qubit q is bit q of the amplitude index.
class Statevector {
  public:
    /// |0...0> on n_qubits in [1, 24].
    explicit Statevector(unsigned n_qubits);

    static Statevector zero(unsigned n_qubits) { return Statevector(n_qubits); }

    /// Adopts an amplitude array whose length must be a power of two. The
    /// amplitudes are taken as given (no normalization).
    static Statevector from_amplitudes(std::vector<Complex> amps);

    unsigned n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    void apply(const Gate& gate, unsigned qubit);
    void apply_matrix(const Mat2& m, unsigned qubit);
    /// Applies `gate` on `target` where `control` is 1. Only X and RY are
    /// accepted as controlled gates.
    void apply_controlled(const Gate& gate, unsigned control, unsigned target);
    void apply_controlled_matrix(const Mat2& m, unsigned control, unsigned target);
    void apply_xx(unsigned q1, unsigned q2, double phi);

    /// Projects `qubit` onto `outcome` and renormalizes. Returns the
    /// pre-projection probability of `outcome`; throws ImpossibleBranch when
    /// it is below kImpossibleBranchThreshold.
    double project_qubit(unsigned qubit, unsigned outcome);

    /// Probability that `qubit` reads `outcome`, without collapsing.
    double outcome_probability(unsigned qubit, unsigned outcome) const;

    double norm_squared() const;

    /// Output bit k of the result corresponds to measured_qubits[k].
    ProbDist marginal_distribution(std::span<const unsigned> measured_qubits) const;
    ProbDist distribution() const;

  private:
    Statevector() = default;
    void check_qubit(unsigned q, const char* what) const;
    void check_pair(unsigned a, unsigned b) const;

    unsigned n_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// Multinomial draw of `n_samples` outcomes from `dist`; deterministic for a
/// given seed. Returns counts indexed like `dist.probs`.
std::vector<std::uint64_t> sample(const ProbDist& dist, std::uint64_t n_samples, std::uint64_t rng_seed);

/// Counts normalized to a ProbDist over the same outcome space.
ProbDist empirical_distribution(std::span<const std::uint64_t> counts, unsigned n_bits);

std::string bitstring(std::size_t x, unsigned n_bits);

}  // namespace qnbm
