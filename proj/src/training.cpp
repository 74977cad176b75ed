#include "qnbm/training.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qnbm/worker_pool.hpp"

namespace qnbm {

namespace {

enum Stream : std::uint64_t { kInitStream = 1, kShotStream = 2, kPrecisionStream = 3 };

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (shots && *shots < 1) throw std::invalid_argument("shots must be >= 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        throw std::invalid_argument("Adam betas must lie in [0, 1)");
    }
    if (!(adam_epsilon > 0.0)) throw std::invalid_argument("adam_epsilon must be > 0");
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> gradient,
               const TrainConfig& config) {
    if (params.size() != gradient.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
        throw std::invalid_argument("Adam dimension mismatch");
    }
    ++state.t;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = gradient[k];
        state.m[k] = b1 * state.m[k] + (1.0 - b1) * g;
        state.v[k] = b2 * state.v[k] + (1.0 - b2) * g * g;
        const double m_hat = state.m[k] / c1;
        const double v_hat = state.v[k] / c2;
        params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    }
}

std::vector<double> finite_diff_gradient(const LossFn& loss_fn, std::span<const double> params, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
    std::vector<double> shifted(params.begin(), params.end());
    std::vector<double> grad(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        shifted[k] = params[k] + eps;
        const double plus = loss_fn(shifted);
        shifted[k] = params[k] - eps;
        const double minus = loss_fn(shifted);
        shifted[k] = params[k];
        grad[k] = (plus - minus) / (2.0 * eps);
    }
    return grad;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

double loss(const ModelSpec& model, std::span<const double> params, const ProbDist& target,
            std::optional<std::uint64_t> shots, std::uint64_t sample_seed) {
    const ProbDist dist = model.evaluate(params);
    if (!shots) return kl_divergence(target, dist);
    const auto counts = sample(dist, *shots, sample_seed);
    return kl_divergence(target, empirical_distribution(counts, dist.n_bits));
}

ParamVector initial_params(const ModelSpec& model, std::uint64_t seed) {
    std::mt19937_64 rng(stream_seed(seed, kInitStream));
    const double r = model.init_range();
    std::uniform_real_distribution<double> u(-r, r);
    ParamVector p(model.param_count());
    for (double& x : p) x = u(rng);
    return p;
}

TrainTrace train(const ModelSpec& model, const TargetSpec& target_spec, const TrainConfig& config,
                 std::uint64_t seed, std::optional<ParamVector> initial) {
    config.validate();
    if (target_spec.n_bits != model.output_bits()) {
        throw std::invalid_argument("target has " + std::to_string(target_spec.n_bits) + " bits but " +
                                    model.name() + " outputs " + std::to_string(model.output_bits()));
    }
    const ProbDist target = build_target(target_spec);
    const bool is_qnbm = std::holds_alternative<QnbmModel>(model.variant());

    TrainTrace trace;
    trace.model = model.name();
    trace.target = target_spec.label();
    trace.seed = seed;
    trace.initial_params = initial ? std::move(*initial) : initial_params(model, seed);
    if (trace.initial_params.size() != model.param_count()) {
        throw std::invalid_argument("initial parameter vector has the wrong length");
    }
    ParamVector params = trace.initial_params;
    trace.loss_history.reserve(config.max_iterations);

    AdamState adam(params.size());
    const std::size_t n_params = params.size();
    for (unsigned it = 0; it < config.max_iterations; ++it) {
        // Each loss evaluation of this iteration owns one shot sub-stream.
        std::size_t eval = 0;
        const LossFn loss_fn = [&](std::span<const double> p) {
            const std::uint64_t s = stream_seed(seed, kShotStream, std::uint64_t{it} * (2 * n_params + 1) + eval++);
            return loss(model, p, target, config.shots, s);
        };

        const double current = loss_fn(params);
        if (!std::isfinite(current)) {
            std::ostringstream os;
            os << model.name() << " seed " << seed << ": non-finite loss at iteration " << it;
            throw std::runtime_error(os.str());
        }
        trace.loss_history.push_back(current);
        if (is_qnbm) {
            double acceptance = 1.0;
            model.evaluate(params, &acceptance);
            trace.acceptance_prob_history.push_back(acceptance);
        }

        const auto grad = finite_diff_gradient(loss_fn, params, config.fd_step);
        for (double g : grad) {
            if (!std::isfinite(g)) {
                std::ostringstream os;
                os << model.name() << " seed " << seed << ": non-finite gradient at iteration " << it;
                throw std::runtime_error(os.str());
            }
        }
        adam_step(adam, params, grad, config);
    }

    trace.final_params = params;
    trace.final_dist = model.evaluate(params, &trace.final_acceptance_prob);
    trace.final_kl = kl_divergence(target, trace.final_dist);
    const ValidSet valid = [&](std::size_t x) { return target_spec.is_valid(x); };
    trace.final_precision = precision(trace.final_dist, valid);
    if (config.sample_count > 0) {
        const auto counts = sample(trace.final_dist, config.sample_count, stream_seed(seed, kPrecisionStream));
        trace.final_sampled_precision = precision(counts, valid);
    } else {
        trace.final_sampled_precision = trace.final_precision;
    }
    return trace;
}

std::pair<double, double> mean_std(std::span<const double> xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

TrainSummary summarize(std::span<const TrainTrace> traces) {
    TrainSummary s;
    if (traces.empty()) return s;
    std::vector<double> kl;
    std::vector<double> prec;
    std::vector<double> sprec;
    for (const auto& t : traces) {
        kl.push_back(t.final_kl);
        prec.push_back(t.final_precision);
        sprec.push_back(t.final_sampled_precision);
    }
    std::tie(s.kl_mean, s.kl_std) = mean_std(kl);
    std::tie(s.precision_mean, s.precision_std) = mean_std(prec);
    std::tie(s.sampled_precision_mean, s.sampled_precision_std) = mean_std(sprec);
    for (std::size_t i = 1; i < traces.size(); ++i) {
        if (traces[i].final_kl < traces[s.best].final_kl) s.best = i;
    }
    return s;
}

MultiSeedResult multi_seed_train(const ModelSpec& model, const TargetSpec& target, const TrainConfig& config,
                                 std::span<const std::uint64_t> seeds, unsigned jobs) {
    if (seeds.empty()) throw std::invalid_argument("multi-seed training needs at least one seed");
    std::vector<std::optional<TrainTrace>> slots(seeds.size());
    std::vector<std::string> errors(seeds.size());
    run_tasks(seeds.size(), jobs, [&](std::size_t i) {
        try {
            slots[i] = train(model, target, config, seeds[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    MultiSeedResult result;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (slots[i]) {
            result.traces.push_back(std::move(*slots[i]));
        } else {
            result.failures.push_back({seeds[i], errors[i]});
        }
    }
    result.summary = summarize(result.traces);
    return result;
}

}  // namespace qnbm
