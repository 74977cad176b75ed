#include "qnbm/targets.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qnbm {

void TargetSpec::validate() const {
    if (n_bits < 1 || n_bits > kMaxQubits) throw std::invalid_argument("target bit count outside [1, 24]");
    if (kind == Kind::Cardinality && effective_cardinality() > n_bits) {
        throw std::invalid_argument("cardinality " + std::to_string(effective_cardinality()) + " exceeds " +
                                    std::to_string(n_bits) + " bits");
    }
}

bool TargetSpec::is_valid(std::size_t x) const {
    if (x >= (std::size_t{1} << n_bits)) return false;
    if (kind == Kind::Uniform) return true;
    return static_cast<unsigned>(std::popcount(x)) == effective_cardinality();
}

std::string TargetSpec::label() const {
    if (kind == Kind::Uniform) return "uniform_" + std::to_string(n_bits);
    return "cardinality_" + std::to_string(n_bits) + "_" + std::to_string(effective_cardinality());
}

ProbDist build_target(const TargetSpec& spec) {
    spec.validate();
    ProbDist d{spec.n_bits, std::vector<double>(std::size_t{1} << spec.n_bits, 0.0)};
    std::size_t support = 0;
    for (std::size_t x = 0; x < d.size(); ++x) support += spec.is_valid(x) ? 1 : 0;
    const double p = 1.0 / static_cast<double>(support);
    for (std::size_t x = 0; x < d.size(); ++x) {
        if (spec.is_valid(x)) d.probs[x] = p;
    }
    return d;
}

double kl_divergence(const ProbDist& target, const ProbDist& model) {
    if (target.n_bits != model.n_bits || target.size() != model.size()) {
        throw std::invalid_argument("KL divergence between distributions of different dimension");
    }
    double kl = 0.0;
    for (std::size_t x = 0; x < target.size(); ++x) {
        const double pt = target.probs[x];
        if (pt <= 0.0) continue;
        kl += pt * std::log(pt / std::max(model.probs[x], kKlClip));
    }
    return kl;
}

double precision(const ProbDist& model, const ValidSet& valid) {
    double p = 0.0;
    for (std::size_t x = 0; x < model.size(); ++x) {
        if (valid(x)) p += model.probs[x];
    }
    return std::min(p, 1.0);
}

double precision(std::span<const std::uint64_t> counts, const ValidSet& valid) {
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    for (std::size_t x = 0; x < counts.size(); ++x) {
        total += counts[x];
        if (valid(x)) hits += counts[x];
    }
    if (total == 0) throw std::invalid_argument("precision of an empty sample");
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace qnbm
