#include "qnbm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qnbm/models.hpp"
#include "qnbm/oracle.hpp"
#include "qnbm/targets.hpp"
#include "qnbm/training.hpp"

namespace qnbm::verify {
namespace {

using std::numbers::pi;

Check finish(std::string name, std::size_t cases, double err, double tol) {
    const bool ok = std::isfinite(err) && err <= tol;
    return {std::move(name), cases, err, tol, ok};
}

double max_diff(const ProbDist& a, const ProbDist& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.probs[i] - b.probs[i]));
    return m;
}

struct NeuronCase {
    std::vector<double> weights;
    double bias;
    std::size_t input;
};

std::vector<NeuronCase> neuron_cases(std::mt19937_64& rng, unsigned count) {
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    std::vector<NeuronCase> cases;
    cases.push_back({{0.0}, pi / 4, 0});  // q(pi/4) = pi/4
    while (cases.size() < count) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 3);
        NeuronCase c{std::vector<double>(n), angle(rng), static_cast<std::size_t>(rng() % (1U << n))};
        for (double& w : c.weights) w = angle(rng);
        cases.push_back(std::move(c));
    }
    return cases;
}

// Runs each neuron on a basis input and reads the target rotation and the
// projection probability back off the circuit.
std::pair<Check, Check> neuron_checks(const Options& opt, std::mt19937_64& rng) {
    double act_err = 0.0, prob_err = 0.0;
    const auto cases = neuron_cases(rng, opt.random_neurons);
    for (const auto& c : cases) {
        const auto n = static_cast<unsigned>(c.weights.size());
        Statevector sv(n + 2);
        std::vector<unsigned> inputs(n);
        for (unsigned i = 0; i < n; ++i) {
            inputs[i] = i;
            if ((c.input >> i) & 1U) sv.apply(Gate::x(), i);
        }
        const neuron::NeuronParams params{c.weights, c.bias};
        const double theta = params.theta(c.input);
        double p = 0.0;
        try {
            p = neuron::apply_quantum_neuron(sv, inputs, params, n, n + 1, opt.circuit);
        } catch (const ImpossibleBranch&) {
            act_err = prob_err = std::numeric_limits<double>::infinity();
            continue;
        }
        const Complex a0 = sv[c.input];
        const Complex a1 = sv[c.input | (std::size_t{1} << n)];
        const double extracted = std::atan2(a1.real(), a0.real());
        const double t = std::tan(theta);
        const double expected = std::atan(t * t);
        act_err = std::max({act_err, std::abs(extracted - expected), std::abs(a0.imag()), std::abs(a1.imag())});
        const double c2 = std::cos(theta) * std::cos(theta), s2 = std::sin(theta) * std::sin(theta);
        prob_err = std::max(prob_err, std::abs(p - (c2 * c2 + s2 * s2)));
    }
    return {finish("activation_identity", cases.size(), act_err, 1e-10),
            finish("success_probability", cases.size(), prob_err, 1e-10)};
}

// Random single- and two-qubit gates with occasional projections, replayed
// on the fast engine and the dense oracle.
double random_circuit_error(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi);
    const unsigned n = 2 + static_cast<unsigned>(rng() % (oracle::kMaxOracleQubits - 1));
    oracle::Circuit c{n, {}, {}};
    Statevector sv(n);
    const int depth = 5 + static_cast<int>(rng() % 20);
    for (int g = 0; g < depth; ++g) {
        const auto a = static_cast<unsigned>(rng() % n);
        auto b = static_cast<unsigned>(rng() % n);
        while (b == a) b = static_cast<unsigned>(rng() % n);
        const double phi = ang(rng);
        switch (rng() % 8) {
            case 0:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::H, 0.0, {a}, {}});
                sv.apply(Gate::h(), a);
                break;
            case 1:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::RX, phi, {a}, {}});
                sv.apply(Gate::rx(phi), a);
                break;
            case 2:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::RY, phi, {a}, {}});
                sv.apply(Gate::ry(phi), a);
                break;
            case 3:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::RZ, phi, {a}, {}});
                sv.apply(Gate::rz(phi), a);
                break;
            case 4:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::RY, phi, {b}, {a}});
                sv.apply_controlled(Gate::ry(phi), a, b);
                break;
            case 5:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::X, 0.0, {b}, {a}});
                sv.apply_controlled(Gate::x(), a, b);
                break;
            case 6:
                c.steps.push_back(oracle::GateOp{oracle::GateKind::XX, phi, {a, b}, {}});
                sv.apply_xx(a, b, phi);
                break;
            default: {
                const auto outcome = static_cast<unsigned>(rng() & 1U);
                if (sv.outcome_probability(a, outcome) < 1e-3) break;
                c.steps.push_back(oracle::ProjectOp{a, outcome});
                sv.project_qubit(a, outcome);
                break;
            }
        }
    }
    return max_diff(sv.distribution(), oracle::reference_distribution(c).dist);
}

ParamVector random_params(std::mt19937_64& rng, std::size_t n, double r) {
    std::uniform_real_distribution<double> u(-r, r);
    ParamVector p(n);
    for (double& x : p) x = u(rng);
    return p;
}

Check oracle_check(const Options& opt, std::mt19937_64& rng) {
    double err = 0.0;
    std::size_t cases = 0;
    for (unsigned i = 0; i < opt.oracle_circuits; ++i, ++cases) err = std::max(err, random_circuit_error(rng));
    for (const QnbmTopology t : {QnbmTopology{1, 0, 2}, QnbmTopology{2, 1, 2}, QnbmTopology{2, 0, 3}}) {
        for (int k = 0; k < 10; ++k, ++cases) {
            const auto p = random_params(rng, t.param_count(), 1.5);
            const auto fast = qnbm_distribution(t, p);
            const auto ref = oracle::reference_distribution(oracle::qnbm_circuit(t, p));
            err = std::max({err, max_diff(fast.dist, ref.dist), std::abs(fast.acceptance_prob - ref.acceptance_prob)});
            const auto lp = random_params(rng, t.param_count(), 1.5);
            err = std::max(err, max_diff(linear_qnbm_distribution(t, lp),
                                         oracle::reference_distribution(oracle::linear_qnbm_circuit(t, lp)).dist));
        }
    }
    for (const QcbmConfig c : {QcbmConfig{3, 2}, QcbmConfig{5, 1}}) {
        for (int k = 0; k < 10; ++k, ++cases) {
            const auto p = random_params(rng, c.param_count(), pi);
            err = std::max(err, max_diff(qcbm_distribution(c, p),
                                         oracle::reference_distribution(oracle::qcbm_circuit(c, p)).dist));
        }
    }
    return finish("oracle_equivalence", cases, err, 1e-10);
}

Check normalization_check(std::mt19937_64& rng) {
    const std::vector<ModelSpec> models = {ModelSpec::qnbm({3, 3, 4}), ModelSpec::qnbm({4, 0, 5}),
                                           ModelSpec::linear_qnbm({4, 0, 5}), ModelSpec::qcbm({5, 2})};
    double err = 0.0;
    std::size_t cases = 0;
    for (const auto& m : models) {
        for (int k = 0; k < 10; ++k, ++cases) {
            double acc = 1.0;
            const ProbDist d = m.evaluate(random_params(rng, m.param_count(), m.init_range()), &acc);
            double sum = 0.0;
            for (double x : d.probs) {
                if (x < 0) err = std::max(err, -x);
                sum += x;
            }
            err = std::max(err, std::abs(sum - 1.0));
            if (!(acc > 0.0 && acc <= 1.0 + 1e-12)) err = std::numeric_limits<double>::infinity();
        }
    }
    return finish("normalization", cases, err, 1e-10);
}

// The failure branch times the recovery rotation must be a multiple of I.
Check recovery_check(const Options& opt, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.1, 1.4);
    const Mat2 r = neuron::recovery_rotation();
    double err = 0.0;
    const unsigned n = 50;
    for (unsigned k = 0; k < n; ++k) {
        const double theta = (rng() & 1U ? -1.0 : 1.0) * mag(rng);
        const Mat2 f = neuron::branch_operator(theta, 1, opt.circuit);
        double fro = 0.0;
        for (const Complex& z : f) fro += std::norm(z);
        const double s = std::sqrt(fro / 2.0);
        const Mat2 p{(r[0] * f[0] + r[1] * f[2]) / s, (r[0] * f[1] + r[1] * f[3]) / s,
                     (r[2] * f[0] + r[3] * f[2]) / s, (r[2] * f[1] + r[3] * f[3]) / s};
        err = std::max({err, std::abs(p[1]), std::abs(p[2]), std::abs(p[0] - p[3]), std::abs(std::abs(p[0]) - 1.0)});
    }
    return finish("recovery_algebra", n, err, 1e-12);
}

Check gradient_check(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double err = 0.0;
    const unsigned n = 20;
    for (unsigned k = 0; k < n; ++k) {
        std::vector<double> a(6), b(6), theta(6);
        for (std::size_t i = 0; i < 6; ++i) a[i] = u(rng), b[i] = u(rng), theta[i] = u(rng);
        const LossFn quad = [&](std::span<const double> t) {
            double s = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) s += a[i] * t[i] * t[i] + b[i] * t[i];
            return s;
        };
        const auto g = finite_diff_gradient(quad, theta, 0.1);
        for (std::size_t i = 0; i < 6; ++i) err = std::max(err, std::abs(g[i] - (2 * a[i] * theta[i] + b[i])));
    }
    return finish("gradient_quadratic", n, err, 1e-12);
}

Check gradient_consistency_check(std::mt19937_64& rng) {
    const auto model = ModelSpec::qnbm({1, 0, 2});
    const ProbDist target = build_target(TargetSpec::constrained(2));
    const LossFn f = [&](std::span<const double> p) { return loss(model, p, target); };
    double err = 0.0;
    const unsigned n = 10;
    for (unsigned k = 0; k < n; ++k) {
        const auto p = random_params(rng, model.param_count(), 1.0);
        const auto fine = finite_diff_gradient(f, p, 1e-4);
        const auto coarse = finite_diff_gradient(f, p, 0.1);
        double ab = 0, aa = 0, bb = 0;
        for (std::size_t i = 0; i < p.size(); ++i) ab += fine[i] * coarse[i], aa += fine[i] * fine[i],
                                                    bb += coarse[i] * coarse[i];
        err = std::max(err, 1.0 - ab / std::sqrt(aa * bb));
    }
    return finish("gradient_step_consistency", n, err, 0.1);
}

}  // namespace

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Report run(const Options& options) {
    std::mt19937_64 rng(options.seed);
    Report r;
    auto [act, prob] = neuron_checks(options, rng);
    r.checks.push_back(std::move(act));
    r.checks.push_back(std::move(prob));
    r.checks.push_back(oracle_check(options, rng));
    r.checks.push_back(normalization_check(rng));
    r.checks.push_back(recovery_check(options, rng));
    r.checks.push_back(gradient_check(rng));
    r.checks.push_back(gradient_consistency_check(rng));
    return r;
}

}  // namespace qnbm::verify
