#include "qnbm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "qnbm/io.hpp"
#include "qnbm/svg.hpp"
#include "qnbm/worker_pool.hpp"

namespace qnbm::experiments {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

std::uint64_t as_uint(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

unsigned as_count(const json& v, const std::string& where) {
    const std::uint64_t x = as_uint(v, where);
    if (x == 0 || x > 1'000'000) throw ConfigError(where + ": expected an integer in [1, 1000000]");
    return static_cast<unsigned>(x);
}

double as_positive(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(where + ": expected a positive number");
    return x;
}

template <class F>
void with_key(const json& obj, const char* key, F&& f) {
    if (const auto it = obj.find(key); it != obj.end()) f(*it);
}

QnbmTopology topology_from_json(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(where + ": topology must be [n_in, n_hid, n_out]");
    QnbmTopology t{static_cast<unsigned>(as_uint(v[0], where)), static_cast<unsigned>(as_uint(v[1], where)),
                   static_cast<unsigned>(as_uint(v[2], where))};
    try {
        t.validate();
        if (t.qubit_count() > kMaxQubits) throw std::invalid_argument("too many qubits");
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return t;
}

QcbmConfig qcbm_from_json(const json& v, const std::string& where) {
    check_keys(v, {"kind", "n_qubits", "layers"}, where);
    if (!v.contains("n_qubits") || !v.contains("layers")) throw ConfigError(where + ": needs n_qubits and layers");
    QcbmConfig c{static_cast<unsigned>(as_uint(v["n_qubits"], where + ".n_qubits")),
                 static_cast<unsigned>(as_uint(v["layers"], where + ".layers"))};
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return c;
}

ModelSpec model_from_json(const json& v, const std::string& where) {
    if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string()) {
        throw ConfigError(where + ": model needs a string 'kind'");
    }
    const std::string kind = v["kind"].get<std::string>();
    if (kind == "qcbm") return ModelSpec::qcbm(qcbm_from_json(v, where));
    check_keys(v, {"kind", "topology"}, where);
    if (!v.contains("topology")) throw ConfigError(where + ": needs topology");
    const QnbmTopology t = topology_from_json(v["topology"], where + ".topology");
    if (kind == "qnbm") return ModelSpec::qnbm(t);
    if (kind == "linear_qnbm") return ModelSpec::linear_qnbm(t);
    throw ConfigError(where + ": unknown model kind '" + kind + "'");
}

TargetSpec target_from_json(const json& v, const std::string& where) {
    check_keys(v, {"kind", "n_bits", "cardinality"}, where);
    if (!v.contains("kind") || !v["kind"].is_string() || !v.contains("n_bits")) {
        throw ConfigError(where + ": target needs kind and n_bits");
    }
    const std::string kind = v["kind"].get<std::string>();
    const auto n = static_cast<unsigned>(as_uint(v["n_bits"], where + ".n_bits"));
    TargetSpec t;
    if (kind == "uniform") {
        if (v.contains("cardinality")) throw ConfigError(where + ": uniform target takes no cardinality");
        t = TargetSpec::uniform(n);
    } else if (kind == "cardinality") {
        std::optional<unsigned> c;
        with_key(v, "cardinality", [&](const json& x) { c = static_cast<unsigned>(as_uint(x, where + ".cardinality")); });
        t = TargetSpec::constrained(n, c);
    } else {
        throw ConfigError(where + ": unknown target kind '" + kind + "'");
    }
    try {
        t.validate();
        if (n > kMaxQubits) throw std::invalid_argument("too many bits");
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return t;
}

std::string opt_cell(const std::optional<double>& x) { return x ? io::format_double(*x) : std::string(); }

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_double(const json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

json settings_json(const ExperimentConfig& c) {
    json s;
    s["seeds"] = c.seeds;
    s["shots"] = c.shots ? json(*c.shots) : json("exact");
    s["learning_rate"] = c.optimizer.learning_rate;
    s["fd_step"] = c.optimizer.fd_step;
    s["adam_beta1"] = c.optimizer.adam_beta1;
    s["adam_beta2"] = c.optimizer.adam_beta2;
    s["adam_epsilon"] = c.optimizer.adam_epsilon;
    s["sample_count"] = c.optimizer.sample_count;
    return s;
}

std::string file_stem(const RunSpec& spec) { return spec.model.name() + "_" + spec.target.label(); }

}  // namespace

std::vector<QnbmTopology> table_topologies() {
    return {
        {1, 0, 2}, {1, 1, 2}, {2, 0, 2}, {1, 0, 3}, {1, 1, 3}, {1, 2, 3}, {2, 0, 3}, {2, 1, 3},
        {2, 2, 3}, {3, 0, 3}, {1, 0, 4}, {1, 1, 4}, {1, 2, 4}, {1, 3, 4}, {2, 0, 4}, {2, 1, 4},
        {2, 2, 4}, {2, 3, 4}, {3, 0, 4}, {3, 1, 4}, {3, 2, 4}, {3, 3, 4}, {4, 0, 4},
    };
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view tok(text.data() + pos, comma - pos);
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size()) {
            throw ConfigError("--seeds: expected a comma-separated list of non-negative integers");
        }
        seeds.push_back(v);
        pos = comma + 1;
    }
    return seeds;
}

std::optional<std::uint64_t> parse_shots(const std::string& text) {
    if (text == "exact") return std::nullopt;
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || v == 0) {
        throw ConfigError("--shots: expected a positive integer or 'exact'");
    }
    return v;
}

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig c;
    check_keys(doc, {"seeds", "shots", "jobs", "optimizer", "sample_count", "train", "sweep", "compare", "appendix",
                     "verify"},
               "config");
    with_key(doc, "seeds", [&](const json& v) {
        if (!v.is_array() || v.empty()) throw ConfigError("seeds: expected a non-empty array");
        c.seeds.clear();
        for (const auto& s : v) c.seeds.push_back(as_uint(s, "seeds"));
    });
    with_key(doc, "shots", [&](const json& v) {
        if (v.is_string()) {
            c.shots = parse_shots(v.get<std::string>());
        } else {
            c.shots = as_uint(v, "shots");
            if (*c.shots == 0) throw ConfigError("shots: expected a positive integer or \"exact\"");
        }
    });
    with_key(doc, "jobs", [&](const json& v) { c.jobs = as_count(v, "jobs"); });
    with_key(doc, "sample_count", [&](const json& v) { c.optimizer.sample_count = as_count(v, "sample_count"); });
    with_key(doc, "optimizer", [&](const json& v) {
        check_keys(v, {"learning_rate", "fd_step", "beta1", "beta2", "epsilon"}, "optimizer");
        with_key(v, "learning_rate", [&](const json& x) { c.optimizer.learning_rate = as_positive(x, "learning_rate"); });
        with_key(v, "fd_step", [&](const json& x) { c.optimizer.fd_step = as_positive(x, "fd_step"); });
        with_key(v, "beta1", [&](const json& x) { c.optimizer.adam_beta1 = as_positive(x, "beta1"); });
        with_key(v, "beta2", [&](const json& x) { c.optimizer.adam_beta2 = as_positive(x, "beta2"); });
        with_key(v, "epsilon", [&](const json& x) { c.optimizer.adam_epsilon = as_positive(x, "epsilon"); });
        try {
            c.optimizer.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("optimizer: ") + e.what());
        }
    });
    with_key(doc, "train", [&](const json& v) {
        check_keys(v, {"model", "target", "iterations"}, "train");
        RunSpec r{ModelSpec::qnbm({4, 0, 5}), TargetSpec::constrained(5, 2), 500, std::nullopt};
        with_key(v, "model", [&](const json& x) { r.model = model_from_json(x, "train.model"); });
        with_key(v, "target", [&](const json& x) { r.target = target_from_json(x, "train.target"); });
        with_key(v, "iterations", [&](const json& x) { r.iterations = as_count(x, "train.iterations"); });
        if (r.model.output_bits() != r.target.n_bits) {
            throw ConfigError("train: model has " + std::to_string(r.model.output_bits()) + " output bits, target has " +
                              std::to_string(r.target.n_bits));
        }
        c.train = r;
    });
    with_key(doc, "sweep", [&](const json& v) {
        check_keys(v, {"topologies", "iterations_n_out_2", "iterations"}, "sweep");
        with_key(v, "topologies", [&](const json& x) {
            if (!x.is_array() || x.empty()) throw ConfigError("sweep.topologies: expected a non-empty array");
            c.sweep_topologies.clear();
            for (const auto& t : x) c.sweep_topologies.push_back(topology_from_json(t, "sweep.topologies"));
        });
        with_key(v, "iterations_n_out_2",
                 [&](const json& x) { c.sweep_iterations_n_out_2 = as_count(x, "sweep.iterations_n_out_2"); });
        with_key(v, "iterations", [&](const json& x) { c.sweep_iterations = as_count(x, "sweep.iterations"); });
    });
    with_key(doc, "compare", [&](const json& v) {
        check_keys(v, {"models", "n_bits", "cardinality", "uniform_iterations", "cardinality_iterations"}, "compare");
        with_key(v, "models", [&](const json& x) {
            if (!x.is_array() || x.empty()) throw ConfigError("compare.models: expected a non-empty array");
            c.compare_models.clear();
            for (const auto& m : x) c.compare_models.push_back(model_from_json(m, "compare.models"));
        });
        with_key(v, "n_bits", [&](const json& x) { c.compare_n_bits = as_count(x, "compare.n_bits"); });
        with_key(v, "cardinality",
                 [&](const json& x) { c.compare_cardinality = static_cast<unsigned>(as_uint(x, "compare.cardinality")); });
        with_key(v, "uniform_iterations",
                 [&](const json& x) { c.compare_uniform_iterations = as_count(x, "compare.uniform_iterations"); });
        with_key(v, "cardinality_iterations",
                 [&](const json& x) { c.compare_cardinality_iterations = as_count(x, "compare.cardinality_iterations"); });
    });
    with_key(doc, "appendix", [&](const json& v) {
        check_keys(v, {"qcbm", "linear_qnbm", "reference_qnbm", "uniform_iterations", "cardinality_iterations",
                       "linear_iterations", "reference_iterations"},
                   "appendix");
        with_key(v, "qcbm", [&](const json& x) { c.appendix_qcbm = qcbm_from_json(x, "appendix.qcbm"); });
        with_key(v, "linear_qnbm",
                 [&](const json& x) { c.appendix_linear = topology_from_json(x, "appendix.linear_qnbm"); });
        with_key(v, "reference_qnbm",
                 [&](const json& x) { c.appendix_reference = topology_from_json(x, "appendix.reference_qnbm"); });
        with_key(v, "uniform_iterations",
                 [&](const json& x) { c.appendix_uniform_iterations = as_count(x, "appendix.uniform_iterations"); });
        with_key(v, "cardinality_iterations", [&](const json& x) {
            c.appendix_cardinality_iterations = as_count(x, "appendix.cardinality_iterations");
        });
        with_key(v, "linear_iterations",
                 [&](const json& x) { c.appendix_linear_iterations = as_count(x, "appendix.linear_iterations"); });
        with_key(v, "reference_iterations",
                 [&](const json& x) { c.appendix_reference_iterations = as_count(x, "appendix.reference_iterations"); });
    });
    with_key(doc, "verify", [&](const json& v) {
        check_keys(v, {"flip_controlled_sign"}, "verify");
        with_key(v, "flip_controlled_sign", [&](const json& x) {
            if (!x.is_boolean()) throw ConfigError("verify.flip_controlled_sign: expected a boolean");
            c.verify_flip_controlled_sign = x.get<bool>();
        });
    });

    try {
        TargetSpec::constrained(c.compare_n_bits, c.compare_cardinality).validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("compare: ") + e.what());
    }
    for (const auto& m : c.compare_models) {
        if (m.output_bits() != c.compare_n_bits) {
            throw ConfigError("compare: model " + m.name() + " does not produce " + std::to_string(c.compare_n_bits) +
                              " bits");
        }
    }
    const unsigned appendix_bits = c.appendix_qcbm.n_qubits;
    if (c.appendix_linear.n_out != appendix_bits || c.appendix_reference.n_out != appendix_bits) {
        throw ConfigError("appendix: models must share the QCBM's " + std::to_string(appendix_bits) + " output bits");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

std::vector<RunSpec> train_runs(const ExperimentConfig& c) {
    if (c.train) return {*c.train};
    return {{ModelSpec::qnbm({4, 0, 5}), TargetSpec::constrained(5, 2), 500, std::nullopt}};
}

std::vector<RunSpec> sweep_runs(const ExperimentConfig& c) {
    std::vector<RunSpec> runs;
    for (const auto& t : c.sweep_topologies) {
        const unsigned iters = t.n_out == 2 ? c.sweep_iterations_n_out_2 : c.sweep_iterations;
        runs.push_back({ModelSpec::qnbm(t), TargetSpec::constrained(t.n_out), iters, t});
    }
    return runs;
}

std::vector<RunSpec> compare_runs(const ExperimentConfig& c) {
    std::vector<RunSpec> runs;
    for (const auto& m : c.compare_models) {
        runs.push_back({m, TargetSpec::uniform(c.compare_n_bits), c.compare_uniform_iterations, std::nullopt});
    }
    for (const auto& m : c.compare_models) {
        runs.push_back({m, TargetSpec::constrained(c.compare_n_bits, c.compare_cardinality),
                        c.compare_cardinality_iterations, std::nullopt});
    }
    return runs;
}

std::vector<RunSpec> appendix_runs(const ExperimentConfig& c) {
    const unsigned n = c.appendix_qcbm.n_qubits;
    const TargetSpec card = TargetSpec::constrained(n);
    return {
        {ModelSpec::qcbm(c.appendix_qcbm), TargetSpec::uniform(n), c.appendix_uniform_iterations, std::nullopt},
        {ModelSpec::qcbm(c.appendix_qcbm), card, c.appendix_cardinality_iterations, std::nullopt},
        {ModelSpec::linear_qnbm(c.appendix_linear), card, c.appendix_linear_iterations, std::nullopt},
        {ModelSpec::qnbm(c.appendix_reference), card, c.appendix_reference_iterations, std::nullopt},
    };
}

Study execute(const std::string& experiment, const std::vector<RunSpec>& runs, const ExperimentConfig& config,
              const ProgressFn& progress) {
    struct Slot {
        std::optional<TrainTrace> trace;
        std::string error;
    };
    const std::size_t n_seeds = config.seeds.size();
    std::vector<Slot> slots(runs.size() * n_seeds);
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    run_tasks(slots.size(), config.jobs, [&](std::size_t i) {
        const RunSpec& spec = runs[i / n_seeds];
        const std::uint64_t seed = config.seeds[i % n_seeds];
        TrainConfig tc = config.optimizer;
        tc.max_iterations = spec.iterations;
        tc.shots = config.shots;
        std::string note;
        try {
            slots[i].trace = train(spec.model, spec.target, tc, seed);
            note = "kl " + io::format_double(slots[i].trace->final_kl);
        } catch (const std::exception& e) {
            slots[i].error = e.what();
            note = "failed: " + slots[i].error;
        }
        const std::size_t k = ++done;
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress("[" + std::to_string(k) + "/" + std::to_string(slots.size()) + "] " + spec.model.name() + " " +
                     spec.target.label() + " seed " + std::to_string(seed) + ": " + note);
        }
    });

    Study study{experiment, {}};
    for (std::size_t r = 0; r < runs.size(); ++r) {
        MultiSeedResult mr;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            Slot& slot = slots[r * n_seeds + s];
            if (slot.trace) {
                mr.traces.push_back(std::move(*slot.trace));
            } else {
                mr.failures.push_back({config.seeds[s], slot.error});
            }
        }
        if (!mr.traces.empty()) mr.summary = summarize(mr.traces);
        study.runs.push_back({runs[r], std::move(mr)});
    }
    return study;
}

bool RunRecord::operator==(const RunRecord& o) const {
    auto same_failures = [&] {
        if (failures.size() != o.failures.size()) return false;
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (failures[i].seed != o.failures[i].seed || failures[i].message != o.failures[i].message) return false;
        }
        return true;
    };
    return model == o.model && kind == o.kind && target == o.target && topology == o.topology &&
           iterations == o.iterations && n_params == o.n_params && n_qubits == o.n_qubits && kl_mean == o.kl_mean &&
           kl_std == o.kl_std && precision_mean == o.precision_mean && precision_std == o.precision_std &&
           sampled_precision_mean == o.sampled_precision_mean && sampled_precision_std == o.sampled_precision_std &&
           best_seed == o.best_seed && best_kl == o.best_kl && best_precision == o.best_precision &&
           best_sampled_precision == o.best_sampled_precision && best_acceptance_prob == o.best_acceptance_prob &&
           seeds == o.seeds && same_failures();
}

RunRecord record_of(const RunResult& run) {
    const RunSpec& s = run.spec;
    RunRecord r;
    r.model = s.model.name();
    r.kind = s.model.kind();
    r.target = s.target.label();
    r.topology = s.topology;
    r.iterations = s.iterations;
    r.n_params = s.model.param_count();
    r.n_qubits = s.model.qubit_count();
    for (const auto& t : run.result.traces) {
        r.seeds.push_back({t.seed, t.final_kl, t.final_precision, t.final_sampled_precision, t.final_acceptance_prob,
                           t.final_params});
    }
    r.failures = run.result.failures;
    if (!run.result.traces.empty()) {
        const TrainSummary& m = run.result.summary;
        r.kl_mean = m.kl_mean;
        r.kl_std = m.kl_std;
        r.precision_mean = m.precision_mean;
        r.precision_std = m.precision_std;
        r.sampled_precision_mean = m.sampled_precision_mean;
        r.sampled_precision_std = m.sampled_precision_std;
        const TrainTrace& b = run.result.best();
        r.best_seed = b.seed;
        r.best_kl = b.final_kl;
        r.best_precision = b.final_precision;
        r.best_sampled_precision = b.final_sampled_precision;
        r.best_acceptance_prob = b.final_acceptance_prob;
    }
    return r;
}

json summary_json(const Study& study, const ExperimentConfig& config) {
    json doc;
    doc["experiment"] = study.experiment;
    doc["settings"] = settings_json(config);
    json runs = json::array();
    for (const auto& run : study.runs) {
        const RunRecord r = record_of(run);
        json j;
        j["model"] = r.model;
        j["kind"] = r.kind;
        j["target"] = r.target;
        if (r.topology) j["topology"] = {r.topology->n_in, r.topology->n_hid, r.topology->n_out};
        j["iterations"] = r.iterations;
        j["n_params"] = r.n_params;
        j["n_qubits"] = r.n_qubits;
        j["kl_mean"] = opt_json(r.kl_mean);
        j["kl_std"] = opt_json(r.kl_std);
        j["precision_mean"] = opt_json(r.precision_mean);
        j["precision_std"] = opt_json(r.precision_std);
        j["sampled_precision_mean"] = opt_json(r.sampled_precision_mean);
        j["sampled_precision_std"] = opt_json(r.sampled_precision_std);
        if (r.best_seed) {
            j["best"] = {{"seed", *r.best_seed},
                         {"final_kl", *r.best_kl},
                         {"final_precision", *r.best_precision},
                         {"error_rate", 1.0 - *r.best_precision},
                         {"final_sampled_precision", *r.best_sampled_precision},
                         {"final_acceptance_prob", *r.best_acceptance_prob}};
        } else {
            j["best"] = nullptr;
        }
        json seeds = json::array();
        for (const auto& s : r.seeds) {
            seeds.push_back({{"seed", s.seed},
                             {"final_kl", s.final_kl},
                             {"final_precision", s.final_precision},
                             {"final_sampled_precision", s.final_sampled_precision},
                             {"final_acceptance_prob", s.final_acceptance_prob},
                             {"final_params", s.final_params}});
        }
        j["seeds"] = std::move(seeds);
        json failures = json::array();
        for (const auto& f : r.failures) failures.push_back({{"seed", f.seed}, {"message", f.message}});
        j["failures"] = std::move(failures);
        runs.push_back(std::move(j));
    }
    doc["runs"] = std::move(runs);
    return doc;
}

std::vector<RunRecord> parse_summary(const json& summary) {
    std::vector<RunRecord> out;
    for (const auto& j : summary.at("runs")) {
        RunRecord r;
        r.model = j.at("model").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.target = j.at("target").get<std::string>();
        if (j.contains("topology")) {
            const auto& t = j["topology"];
            r.topology = QnbmTopology{t[0].get<unsigned>(), t[1].get<unsigned>(), t[2].get<unsigned>()};
        }
        r.iterations = j.at("iterations").get<unsigned>();
        r.n_params = j.at("n_params").get<std::size_t>();
        r.n_qubits = j.at("n_qubits").get<unsigned>();
        r.kl_mean = opt_double(j.at("kl_mean"));
        r.kl_std = opt_double(j.at("kl_std"));
        r.precision_mean = opt_double(j.at("precision_mean"));
        r.precision_std = opt_double(j.at("precision_std"));
        r.sampled_precision_mean = opt_double(j.at("sampled_precision_mean"));
        r.sampled_precision_std = opt_double(j.at("sampled_precision_std"));
        if (const auto& b = j.at("best"); !b.is_null()) {
            r.best_seed = b.at("seed").get<std::uint64_t>();
            r.best_kl = b.at("final_kl").get<double>();
            r.best_precision = b.at("final_precision").get<double>();
            r.best_sampled_precision = b.at("final_sampled_precision").get<double>();
            r.best_acceptance_prob = b.at("final_acceptance_prob").get<double>();
        }
        for (const auto& s : j.at("seeds")) {
            r.seeds.push_back({s.at("seed").get<std::uint64_t>(), s.at("final_kl").get<double>(),
                               s.at("final_precision").get<double>(), s.at("final_sampled_precision").get<double>(),
                               s.at("final_acceptance_prob").get<double>(),
                               s.at("final_params").get<std::vector<double>>()});
        }
        for (const auto& f : j.at("failures")) {
            r.failures.push_back({f.at("seed").get<std::uint64_t>(), f.at("message").get<std::string>()});
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string errors_cell(const std::vector<SeedFailure>& failures) {
    std::string cell;
    for (const auto& f : failures) {
        if (!cell.empty()) cell += "; ";
        cell += "seed " + std::to_string(f.seed) + ": " + f.message;
    }
    return cell;
}

std::string results_csv(const Study& study) {
    std::string out;
    if (study.experiment == "sweep") {
        out += io::csv_line({"n_in", "n_hid", "n_out", "p_num", "n_qubits", "kl_mean", "kl_std", "precision_mean",
                             "precision_std", "errors"});
        for (const auto& run : study.runs) {
            const RunRecord r = record_of(run);
            const QnbmTopology t = r.topology.value_or(QnbmTopology{});
            out += io::csv_line({std::to_string(t.n_in), std::to_string(t.n_hid), std::to_string(t.n_out),
                                 std::to_string(r.n_params), std::to_string(r.n_qubits), opt_cell(r.kl_mean),
                                 opt_cell(r.kl_std), opt_cell(r.precision_mean), opt_cell(r.precision_std),
                                 errors_cell(r.failures)});
        }
        return out;
    }
    out += io::csv_line({"model", "target", "n_params", "n_qubits", "iterations", "kl_mean", "kl_std",
                         "precision_mean", "precision_std", "best_seed", "best_kl", "best_precision",
                         "best_error_rate", "errors"});
    for (const auto& run : study.runs) {
        const RunRecord r = record_of(run);
        const std::string err = r.best_precision ? io::format_double(1.0 - *r.best_precision) : std::string();
        out += io::csv_line({r.model, r.target, std::to_string(r.n_params), std::to_string(r.n_qubits),
                             std::to_string(r.iterations), opt_cell(r.kl_mean), opt_cell(r.kl_std),
                             opt_cell(r.precision_mean), opt_cell(r.precision_std),
                             r.best_seed ? std::to_string(*r.best_seed) : std::string(), opt_cell(r.best_kl),
                             opt_cell(r.best_precision), err, errors_cell(r.failures)});
    }
    return out;
}

std::string trace_csv(const TrainTrace& trace) {
    const bool acc = !trace.acceptance_prob_history.empty();
    std::string out = acc ? io::csv_line({"iteration", "loss", "acceptance_prob"}) : io::csv_line({"iteration", "loss"});
    for (std::size_t i = 0; i < trace.loss_history.size(); ++i) {
        io::CsvRow row{std::to_string(i), io::format_double(trace.loss_history[i])};
        if (acc) row.push_back(io::format_double(trace.acceptance_prob_history[i]));
        out += io::csv_line(row);
    }
    return out;
}

json dist_json(const RunResult& run) {
    const TrainTrace& best = run.result.best();
    const ProbDist target = build_target(run.spec.target);
    json j;
    j["model"] = run.spec.model.name();
    j["target"] = run.spec.target.label();
    j["seed"] = best.seed;
    j["n_bits"] = target.n_bits;
    std::vector<std::string> bits;
    for (std::size_t x = 0; x < target.size(); ++x) bits.push_back(bitstring(x, target.n_bits));
    j["bitstrings"] = bits;
    j["target_probs"] = target.probs;
    j["model_probs"] = best.final_dist.probs;
    j["final_kl"] = best.final_kl;
    j["final_precision"] = best.final_precision;
    return j;
}

namespace {

void write_sweep_heatmaps(const Study& study, const std::filesystem::path& out) {
    std::map<unsigned, std::vector<const RunResult*>> by_out;
    for (const auto& run : study.runs) {
        if (run.spec.topology) by_out[run.spec.topology->n_out].push_back(&run);
    }
    for (const auto& [n_out, runs] : by_out) {
        unsigned max_in = 1, max_hid = 0;
        for (const RunResult* r : runs) {
            max_in = std::max(max_in, r->spec.topology->n_in);
            max_hid = std::max(max_hid, r->spec.topology->n_hid);
        }
        std::vector<std::string> rows, cols;
        for (unsigned h = 0; h <= max_hid; ++h) rows.push_back(std::to_string(h));
        for (unsigned i = 1; i <= max_in; ++i) cols.push_back(std::to_string(i));
        std::vector<svg::HeatCell> cells;
        for (const RunResult* r : runs) {
            const QnbmTopology& t = *r->spec.topology;
            std::optional<double> v;
            if (!r->result.traces.empty()) v = r->result.summary.kl_mean;
            cells.push_back({t.n_hid, t.n_in - 1, v, "P=" + std::to_string(t.param_count())});
        }
        const std::string title = "Mean KL divergence, N_out = " + std::to_string(n_out);
        io::write_atomic(out / ("heatmap_kl_n_out_" + std::to_string(n_out) + ".svg"),
                         svg::heatmap(title, "hidden neurons", rows, "input neurons", cols, cells));
    }
}

void write_comparison_plots(const Study& study, const std::filesystem::path& out) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunResult*>> by_target;
    for (const auto& run : study.runs) {
        const std::string label = run.spec.target.label();
        if (!by_target.count(label)) order.push_back(label);
        by_target[label].push_back(&run);
    }
    for (const auto& label : order) {
        const auto& runs = by_target[label];
        const ProbDist target = build_target(runs.front()->spec.target);
        std::vector<std::string> cats;
        for (std::size_t x = 0; x < target.size(); ++x) cats.push_back(bitstring(x, target.n_bits));
        std::vector<svg::Series> bars{{"target", target.probs}};
        std::vector<svg::Series> curves;
        for (const RunResult* r : runs) {
            if (r->result.traces.empty()) continue;
            const TrainTrace& b = r->result.best();
            bars.push_back({r->spec.model.name(), b.final_dist.probs});
            curves.push_back({r->spec.model.name(), b.loss_history});
        }
        io::write_atomic(out / ("hist_" + label + ".svg"), svg::histogram("Best-seed distributions, " + label, cats, bars));
        io::write_atomic(out / ("loss_" + label + ".svg"), svg::loss_curves("Best-seed training loss, " + label, curves));
    }
}

}  // namespace

void write_study(const Study& study, const ExperimentConfig& config, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    io::write_atomic(out / "results.csv", results_csv(study));
    io::write_atomic(out / "summary.json", summary_json(study, config).dump(2) + "\n");
    for (const auto& run : study.runs) {
        const std::string stem = file_stem(run.spec);
        for (const auto& t : run.result.traces) {
            io::write_atomic(out / ("trace_" + stem + "_" + std::to_string(t.seed) + ".csv"), trace_csv(t));
        }
        if (!run.result.traces.empty()) {
            io::write_atomic(out / ("dist_" + stem + ".json"), dist_json(run).dump(2) + "\n");
        }
    }
    if (study.experiment == "sweep") {
        write_sweep_heatmaps(study, out);
    } else {
        write_comparison_plots(study, out);
    }
}

}  // namespace qnbm::experiments
