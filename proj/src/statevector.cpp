#include "qnbm/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qnbm {

ImpossibleBranch::ImpossibleBranch(unsigned qubit, unsigned outcome, double probability)
    : std::runtime_error("impossible branch: qubit " + std::to_string(qubit) + " outcome " +
                         std::to_string(outcome) + " has probability " + std::to_string(probability)),
      qubit_(qubit),
      outcome_(outcome),
      probability_(probability) {}

Mat2 Gate::matrix() const {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (kind) {
        case Kind::H: {
            const double r = std::numbers::sqrt2 / 2;
            return {r, r, r, -r};
        }
        case Kind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case Kind::RX:
            return {c, Complex{0, -s}, Complex{0, -s}, c};
        case Kind::RY:
            return {c, -s, s, c};
        case Kind::RZ:
            return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
    }
    throw std::logic_error("unknown gate kind");
}

void ProbDist::validate(double tol) const {
    if (probs.size() != (std::size_t{1} << n_bits)) {
        throw std::invalid_argument("distribution length is not 2^n_bits");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("distribution has a negative or non-finite entry");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > tol) {
        std::ostringstream os;
        os << "distribution sums to " << total;
        throw std::invalid_argument(os.str());
    }
}

Statevector::Statevector(unsigned n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::out_of_range("qubit count " + std::to_string(n_qubits) + " outside [1, 24]");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amps) {
    if (amps.size() < 2 || !std::has_single_bit(amps.size()) || amps.size() > (std::size_t{1} << kMaxQubits)) {
        throw std::invalid_argument("amplitude count must be a power of two in [2, 2^24]");
    }
    Statevector sv;
    sv.n_qubits_ = static_cast<unsigned>(std::countr_zero(amps.size()));
    sv.amps_ = std::move(amps);
    return sv;
}

void Statevector::check_qubit(unsigned q, const char* what) const {
    if (q >= n_qubits_) {
        throw std::out_of_range(std::string(what) + " index " + std::to_string(q) + " out of range for " +
                                std::to_string(n_qubits_) + " qubits");
    }
}

void Statevector::check_pair(unsigned a, unsigned b) const {
    check_qubit(a, "qubit");
    check_qubit(b, "qubit");
    if (a == b) throw std::invalid_argument("two-qubit operation on a single qubit " + std::to_string(a));
}

void Statevector::apply(const Gate& gate, unsigned qubit) { apply_matrix(gate.matrix(), qubit); }

void Statevector::apply_matrix(const Mat2& m, unsigned qubit) {
    check_qubit(qubit, "target");
    kernels::apply_1q(amps_, qubit, m);
}

void Statevector::apply_controlled(const Gate& gate, unsigned control, unsigned target) {
    if (gate.kind != Gate::Kind::RY && gate.kind != Gate::Kind::X) {
        throw std::invalid_argument("controlled gate must be RY or X");
    }
    apply_controlled_matrix(gate.matrix(), control, target);
}

void Statevector::apply_controlled_matrix(const Mat2& m, unsigned control, unsigned target) {
    check_pair(control, target);
    kernels::apply_controlled_1q(amps_, control, target, m);
}

void Statevector::apply_xx(unsigned q1, unsigned q2, double phi) {
    check_pair(q1, q2);
    kernels::apply_xx(amps_, q1, q2, phi);
}

double Statevector::outcome_probability(unsigned qubit, unsigned outcome) const {
    check_qubit(qubit, "measured");
    if (outcome > 1) throw std::invalid_argument("outcome must be 0 or 1");
    return kernels::outcome_probability(amps_, qubit, outcome);
}

double Statevector::project_qubit(unsigned qubit, unsigned outcome) {
    const double p = outcome_probability(qubit, outcome);
    if (p < kImpossibleBranchThreshold) {
        kernels::collapse(amps_, qubit, outcome, 0.0);
        throw ImpossibleBranch(qubit, outcome, p);
    }
    kernels::collapse(amps_, qubit, outcome, 1.0 / std::sqrt(p));
    return p;
}

double Statevector::norm_squared() const { return kernels::norm_squared(amps_); }

ProbDist Statevector::marginal_distribution(std::span<const unsigned> measured_qubits) const {
    if (measured_qubits.empty()) throw std::invalid_argument("no qubits to measure");
    std::uint64_t seen = 0;
    for (unsigned q : measured_qubits) {
        check_qubit(q, "measured");
        if (seen & (std::uint64_t{1} << q)) {
            throw std::invalid_argument("duplicate measured qubit " + std::to_string(q));
        }
        seen |= std::uint64_t{1} << q;
    }
    return {static_cast<unsigned>(measured_qubits.size()), kernels::marginal(amps_, measured_qubits)};
}

ProbDist Statevector::distribution() const {
    ProbDist d{n_qubits_, std::vector<double>(amps_.size())};
    for (std::size_t i = 0; i < amps_.size(); ++i) d.probs[i] = std::norm(amps_[i]);
    return d;
}

std::vector<std::uint64_t> sample(const ProbDist& dist, std::uint64_t n_samples, std::uint64_t rng_seed) {
    dist.validate(1e-8);
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");

    std::size_t last = 0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist.probs[k] > 0.0) last = k;
    }

    std::mt19937_64 rng(rng_seed);
    std::vector<std::uint64_t> counts(dist.size(), 0);
    // Sequential conditional binomials; the last outcome with nonzero mass
    // takes whatever is left.
    std::uint64_t remaining = n_samples;
    double mass_left = 1.0;
    for (std::size_t k = 0; k <= last && remaining > 0; ++k) {
        const double p = dist.probs[k];
        if (p <= 0.0) continue;
        if (k == last || p >= mass_left) {
            counts[k] = remaining;
            break;
        }
        std::binomial_distribution<std::uint64_t> draw(remaining, p / mass_left);
        counts[k] = draw(rng);
        remaining -= counts[k];
        mass_left -= p;
    }
    return counts;
}

ProbDist empirical_distribution(std::span<const std::uint64_t> counts, unsigned n_bits) {
    if (counts.size() != (std::size_t{1} << n_bits)) throw std::invalid_argument("count vector length mismatch");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("empty sample");
    ProbDist d{n_bits, std::vector<double>(counts.size())};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        d.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return d;
}

std::string bitstring(std::size_t x, unsigned n_bits) {
    std::string s(n_bits, '0');
    for (unsigned k = 0; k < n_bits; ++k) {
        if ((x >> k) & 1U) s[k] = '1';
    }
    return s;
}

}  // namespace qnbm
