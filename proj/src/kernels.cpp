#include "qnbm/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>

namespace qnbm::kernels {

namespace {

using Index = std::int64_t;

constexpr Index kReduceBlock = Index{1} << 12;

std::atomic<std::size_t> g_parallel_min_size{std::size_t{1} << 14};

bool run_parallel(std::size_t n) { return n >= g_parallel_min_size.load(std::memory_order_relaxed); }

// Inserts a zero bit at position `bit`, shifting the higher bits up.
inline Index insert_zero(Index i, unsigned bit) {
    const Index lo = (Index{1} << bit) - 1;
    return ((i & ~lo) << 1) | (i & lo);
}

inline Index insert_two_zeros(Index i, unsigned a, unsigned b) {
    const unsigned lo = std::min(a, b);
    const unsigned hi = std::max(a, b);
    return insert_zero(insert_zero(i, lo), hi);
}

inline void rotate_pair(Complex& a0, Complex& a1, const Mat2& m) {
    const Complex x0 = a0;
    const Complex x1 = a1;
    a0 = m[0] * x0 + m[1] * x1;
    a1 = m[2] * x0 + m[3] * x1;
}

inline void xx_quad(Complex* a, Index i00, Index i01, Index i10, Index i11, double c, double s) {
    const Complex mis{0.0, -s};
    const Complex a00 = a[i00];
    const Complex a01 = a[i01];
    const Complex a10 = a[i10];
    const Complex a11 = a[i11];
    a[i00] = c * a00 + mis * a11;
    a[i11] = c * a11 + mis * a00;
    a[i01] = c * a01 + mis * a10;
    a[i10] = c * a10 + mis * a01;
}

}  // namespace

std::size_t parallel_min_size() { return g_parallel_min_size.load(std::memory_order_relaxed); }

void set_parallel_min_size(std::size_t n) { g_parallel_min_size.store(n, std::memory_order_relaxed); }

void apply_1q(std::span<Complex> amps, unsigned qubit, const Mat2& m) {
    if (!run_parallel(amps.size())) {
        serial::apply_1q(amps, qubit, m);
        return;
    }
    const Index half = static_cast<Index>(amps.size() / 2);
    const Index mask = Index{1} << qubit;
    Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < half; ++i) {
        const Index i0 = insert_zero(i, qubit);
        rotate_pair(a[i0], a[i0 | mask], m);
    }
}

void apply_controlled_1q(std::span<Complex> amps, unsigned control, unsigned target, const Mat2& m) {
    if (!run_parallel(amps.size())) {
        serial::apply_controlled_1q(amps, control, target, m);
        return;
    }
    const Index quarter = static_cast<Index>(amps.size() / 4);
    const Index cmask = Index{1} << control;
    const Index tmask = Index{1} << target;
    Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < quarter; ++i) {
        const Index i0 = insert_two_zeros(i, control, target) | cmask;
        rotate_pair(a[i0], a[i0 | tmask], m);
    }
}

void apply_xx(std::span<Complex> amps, unsigned q1, unsigned q2, double phi) {
    if (!run_parallel(amps.size())) {
        serial::apply_xx(amps, q1, q2, phi);
        return;
    }
    const Index quarter = static_cast<Index>(amps.size() / 4);
    const Index m1 = Index{1} << q1;
    const Index m2 = Index{1} << q2;
    const double c = std::cos(phi / 2);
    const double s = std::sin(phi / 2);
    Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < quarter; ++i) {
        const Index i00 = insert_two_zeros(i, q1, q2);
        xx_quad(a, i00, i00 | m1, i00 | m2, i00 | m1 | m2, c, s);
    }
}

double outcome_probability(std::span<const Complex> amps, unsigned qubit, unsigned outcome) {
    if (!run_parallel(amps.size())) {
        return serial::outcome_probability(amps, qubit, outcome);
    }
    const Index half = static_cast<Index>(amps.size() / 2);
    const Index set = outcome ? (Index{1} << qubit) : 0;
    const Index blocks = (half + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
    const Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index b = 0; b < blocks; ++b) {
        double acc = 0.0;
        const Index end = std::min(half, (b + 1) * kReduceBlock);
        for (Index i = b * kReduceBlock; i < end; ++i) {
            acc += std::norm(a[insert_zero(i, qubit) | set]);
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void collapse(std::span<Complex> amps, unsigned qubit, unsigned outcome, double scale) {
    if (!run_parallel(amps.size())) {
        serial::collapse(amps, qubit, outcome, scale);
        return;
    }
    const Index half = static_cast<Index>(amps.size() / 2);
    const Index mask = Index{1} << qubit;
    const Index keep = outcome ? mask : 0;
    const Index drop = outcome ? 0 : mask;
    Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < half; ++i) {
        const Index i0 = insert_zero(i, qubit);
        a[i0 | keep] *= scale;
        a[i0 | drop] = 0.0;
    }
}

double norm_squared(std::span<const Complex> amps) {
    if (!run_parallel(amps.size())) {
        return serial::norm_squared(amps);
    }
    const Index n = static_cast<Index>(amps.size());
    const Index blocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
    const Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index b = 0; b < blocks; ++b) {
        double acc = 0.0;
        const Index end = std::min(n, (b + 1) * kReduceBlock);
        for (Index i = b * kReduceBlock; i < end; ++i) acc += std::norm(a[i]);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

std::vector<double> marginal(std::span<const Complex> amps, std::span<const unsigned> qubits) {
    if (!run_parallel(amps.size())) {
        return serial::marginal(amps, qubits);
    }
    const Index n_out = Index{1} << qubits.size();
    Index measured = 0;
    for (unsigned q : qubits) measured |= Index{1} << q;
    const Index full = static_cast<Index>(amps.size()) - 1;
    const Index rest = full & ~measured;

    std::vector<double> probs(static_cast<std::size_t>(n_out), 0.0);
    const Complex* a = amps.data();
#pragma omp parallel for schedule(static)
    for (Index y = 0; y < n_out; ++y) {
        Index base = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if ((y >> k) & 1) base |= Index{1} << qubits[k];
        }
        double acc = 0.0;
        // Enumerate every subset of `rest` in increasing order.
        Index sub = 0;
        do {
            acc += std::norm(a[base | sub]);
            sub = ((sub | ~rest) + 1) & rest;
        } while (sub != 0);
        probs[static_cast<std::size_t>(y)] = acc;
    }
    return probs;
}

namespace serial {

void apply_1q(std::span<Complex> amps, unsigned qubit, const Mat2& m) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            rotate_pair(amps[j], amps[j + stride], m);
        }
    }
}

void apply_controlled_1q(std::span<Complex> amps, unsigned control, unsigned target, const Mat2& m) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) rotate_pair(amps[i], amps[i | tmask], m);
    }
}

void apply_xx(std::span<Complex> amps, unsigned q1, unsigned q2, double phi) {
    const std::size_t m1 = std::size_t{1} << q1;
    const std::size_t m2 = std::size_t{1} << q2;
    const double c = std::cos(phi / 2);
    const double s = std::sin(phi / 2);
    Complex* a = amps.data();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!(i & m1) && !(i & m2)) {
            const auto i00 = static_cast<Index>(i);
            xx_quad(a, i00, i00 | static_cast<Index>(m1), i00 | static_cast<Index>(m2),
                    i00 | static_cast<Index>(m1 | m2), c, s);
        }
    }
}

double outcome_probability(std::span<const Complex> amps, unsigned qubit, unsigned outcome) {
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i >> qubit) & 1U) == outcome) total += std::norm(amps[i]);
    }
    return total;
}

void collapse(std::span<Complex> amps, unsigned qubit, unsigned outcome, double scale) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i >> qubit) & 1U) == outcome) {
            amps[i] *= scale;
        } else {
            amps[i] = 0.0;
        }
    }
}

double norm_squared(std::span<const Complex> amps) {
    double total = 0.0;
    for (const Complex& a : amps) total += std::norm(a);
    return total;
}

std::vector<double> marginal(std::span<const Complex> amps, std::span<const unsigned> qubits) {
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t y = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) y |= ((i >> qubits[k]) & 1U) << k;
        probs[y] += std::norm(amps[i]);
    }
    return probs;
}

}  // namespace serial
}  // namespace qnbm::kernels
