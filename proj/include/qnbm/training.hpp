#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnbm/models.hpp"
#include "qnbm/targets.hpp"

namespace qnbm {

struct TrainConfig {
    double learning_rate = 0.2;
    /// Central finite-difference shift.
    double fd_step = 0.1;
    unsigned max_iterations = 200;
    /// Shots per loss evaluation; nullopt trains on exact distributions.
    std::optional<std::uint64_t> shots;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    /// Draws used for the sampled precision reported after training.
    std::uint64_t sample_count = 10000;

    void validate() const;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// Bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient,
               const TrainConfig& config);

using LossFn = std::function<double(std::span<const double>)>;

/// g_k = (L(p + eps e_k) - L(p - eps e_k)) / (2 eps).
std::vector<double> finite_diff_gradient(const LossFn& loss_fn, std::span<const double> params, double eps);

/// Derives an independent 64-bit seed for sub-stream (a, b) of `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Exact mode (shots unset): KL(target, model). Shot mode: KL(target,
/// empirical distribution of `shots` draws seeded by `sample_seed`).
double loss(const ModelSpec& model, std::span<const double> params, const ProbDist& target,
            std::optional<std::uint64_t> shots = std::nullopt, std::uint64_t sample_seed = 0);

/// Uniform(-r, r) initialization with r = model.init_range().
ParamVector initial_params(const ModelSpec& model, std::uint64_t seed);

struct TrainTrace {
    std::string model;
    std::string target;
    std::uint64_t seed = 0;
    /// Loss at the start of each iteration, before its Adam step.
    std::vector<double> loss_history;
    /// QNBM only: post-selection acceptance at the start of each iteration.
    std::vector<double> acceptance_prob_history;
    ParamVector initial_params;
    ParamVector final_params;
    /// Exact KL and precision of the final parameters.
    double final_kl = 0.0;
    double final_precision = 0.0;
    /// Precision over `sample_count` draws from the final distribution.
    double final_sampled_precision = 0.0;
    double final_acceptance_prob = 1.0;
    ProbDist final_dist;
};

/// Trains from `initial` when given, else from initial_params(model, seed).
/// Throws std::runtime_error if the loss becomes non-finite.
TrainTrace train(const ModelSpec& model, const TargetSpec& target, const TrainConfig& config, std::uint64_t seed,
                 std::optional<ParamVector> initial = std::nullopt);

struct SeedFailure {
    std::uint64_t seed;
    std::string message;
};

struct TrainSummary {
    double kl_mean = 0.0;
    double kl_std = 0.0;
    double precision_mean = 0.0;
    double precision_std = 0.0;
    double sampled_precision_mean = 0.0;
    double sampled_precision_std = 0.0;
    /// Index into `traces` of the run with the lowest final loss.
    std::size_t best = 0;
};

struct MultiSeedResult {
    std::vector<TrainTrace> traces;  // successful runs, in seed-list order
    std::vector<SeedFailure> failures;
    TrainSummary summary;

    const TrainTrace& best() const { return traces.at(summary.best); }
};

/// Sample mean and (n-1)-denominator standard deviation; std is 0 for n < 2.
std::pair<double, double> mean_std(std::span<const double> xs);

TrainSummary summarize(std::span<const TrainTrace> traces);

/// One train() per seed on up to `jobs` threads. Failed seeds are recorded,
/// not rethrown. Results are independent of `jobs`.
MultiSeedResult multi_seed_train(const ModelSpec& model, const TargetSpec& target, const TrainConfig& config,
                                 std::span<const std::uint64_t> seeds, unsigned jobs = 1);

}  // namespace qnbm
