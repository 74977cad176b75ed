#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "qnbm/statevector.hpp"

namespace qnbm {

inline constexpr double kKlClip = 1e-16;

struct TargetSpec {
    enum class Kind { Uniform, Cardinality };

    Kind kind = Kind::Uniform;
    unsigned n_bits = 1;
    /// Hamming weight for cardinality targets; floor(n_bits / 2) when unset.
    std::optional<unsigned> cardinality;

    static TargetSpec uniform(unsigned n) { return {Kind::Uniform, n, std::nullopt}; }
    static TargetSpec constrained(unsigned n, std::optional<unsigned> c = std::nullopt) {
        return {Kind::Cardinality, n, c};
    }

    unsigned effective_cardinality() const { return cardinality.value_or(n_bits / 2); }
    void validate() const;
    /// Whether bitstring x belongs to the target's support.
    bool is_valid(std::size_t x) const;
    /// "uniform_5" or "cardinality_5_2".
    std::string label() const;
};

ProbDist build_target(const TargetSpec& spec);

/// sum_x P_t(x) ln(P_t(x) / max(P_m(x), kKlClip)); zero-target terms are 0.
double kl_divergence(const ProbDist& target, const ProbDist& model);

using ValidSet = std::function<bool(std::size_t)>;

/// Exact precision: model probability mass on the valid set.
double precision(const ProbDist& model, const ValidSet& valid);
/// Sampled precision: fraction of draws that land in the valid set.
double precision(std::span<const std::uint64_t> counts, const ValidSet& valid);

}  // namespace qnbm
