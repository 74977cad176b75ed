#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qnbm {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

/// In-place amplitude kernels over a dense array of length 2^n.
///
/// Qubit q addresses bit q of the amplitude index (little-endian). Every
/// kernel exists twice: the OpenMP version in `kernels` and a plain serial
/// version in `kernels::serial` that the tests and benchmarks use as the
/// reference. Reductions are accumulated in fixed-size blocks and summed in
/// block order, so results do not depend on the number of OpenMP threads.
namespace kernels {

/// Arrays shorter than this run serially even in the parallel kernels.
std::size_t parallel_min_size();
void set_parallel_min_size(std::size_t n);

void apply_1q(std::span<Complex> amps, unsigned qubit, const Mat2& m);
void apply_controlled_1q(std::span<Complex> amps, unsigned control, unsigned target, const Mat2& m);
/// exp(-i phi/2 X(q1) X(q2)).
void apply_xx(std::span<Complex> amps, unsigned q1, unsigned q2, double phi);

/// Probability mass on amplitudes whose bit `qubit` equals `outcome`.
double outcome_probability(std::span<const Complex> amps, unsigned qubit, unsigned outcome);
/// Zeroes amplitudes with bit `qubit` != `outcome` and scales the rest.
void collapse(std::span<Complex> amps, unsigned qubit, unsigned outcome, double scale);

double norm_squared(std::span<const Complex> amps);

/// Marginal probabilities; bit k of the output index is `qubits[k]`.
std::vector<double> marginal(std::span<const Complex> amps, std::span<const unsigned> qubits);

namespace serial {

void apply_1q(std::span<Complex> amps, unsigned qubit, const Mat2& m);
void apply_controlled_1q(std::span<Complex> amps, unsigned control, unsigned target, const Mat2& m);
void apply_xx(std::span<Complex> amps, unsigned q1, unsigned q2, double phi);
double outcome_probability(std::span<const Complex> amps, unsigned qubit, unsigned outcome);
void collapse(std::span<Complex> amps, unsigned qubit, unsigned outcome, double scale);
double norm_squared(std::span<const Complex> amps);
std::vector<double> marginal(std::span<const Complex> amps, std::span<const unsigned> qubits);

}  // namespace serial
}  // namespace kernels
}  // namespace qnbm
