#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnbm/models.hpp"
#include "qnbm/targets.hpp"
#include "qnbm/training.hpp"

namespace qnbm::experiments {

/// Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    ModelSpec model;
    TargetSpec target;
    unsigned iterations;
    /// Set for sweep runs; becomes the topology columns of results.csv.
    std::optional<QnbmTopology> topology;
};

/// The 23 topologies of the network-design study, in table order.
std::vector<QnbmTopology> table_topologies();

struct ExperimentConfig {
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    /// nullopt trains on exact probabilities.
    std::optional<std::uint64_t> shots = 10000;
    unsigned jobs = 1;
    /// Optimizer and sampling settings; shots and iterations are per run.
    TrainConfig optimizer;

    std::optional<RunSpec> train;

    std::vector<QnbmTopology> sweep_topologies = table_topologies();
    unsigned sweep_iterations_n_out_2 = 200;
    unsigned sweep_iterations = 500;

    std::vector<ModelSpec> compare_models{ModelSpec::qnbm({4, 0, 5}), ModelSpec::qcbm({5, 1})};
    unsigned compare_n_bits = 5;
    unsigned compare_cardinality = 2;
    unsigned compare_uniform_iterations = 200;
    unsigned compare_cardinality_iterations = 500;

    QcbmConfig appendix_qcbm{5, 2};
    QnbmTopology appendix_linear{4, 0, 5};
    QnbmTopology appendix_reference{4, 0, 5};
    unsigned appendix_uniform_iterations = 200;
    unsigned appendix_cardinality_iterations = 1000;
    unsigned appendix_linear_iterations = 500;
    unsigned appendix_reference_iterations = 500;

    /// Verify fixture: flips the sign of the ancilla-controlled rotation.
    bool verify_flip_controlled_sign = false;
};

/// Strict parse: unknown keys, wrong types and invalid models or targets
/// throw ConfigError. Missing keys keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "--seeds" text such as "0,1,2".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// Parses "--shots" text: a positive integer or "exact".
std::optional<std::uint64_t> parse_shots(const std::string& text);

std::vector<RunSpec> train_runs(const ExperimentConfig& config);
std::vector<RunSpec> sweep_runs(const ExperimentConfig& config);
std::vector<RunSpec> compare_runs(const ExperimentConfig& config);
std::vector<RunSpec> appendix_runs(const ExperimentConfig& config);

struct RunResult {
    RunSpec spec;
    MultiSeedResult result;
};

struct Study {
    std::string experiment;
    std::vector<RunResult> runs;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Trains every (run, seed) pair on a pool of config.jobs workers and
/// aggregates per run. Results do not depend on the worker count.
Study execute(const std::string& experiment, const std::vector<RunSpec>& runs, const ExperimentConfig& config,
              const ProgressFn& progress = {});

struct SeedRecord {
    std::uint64_t seed = 0;
    double final_kl = 0.0;
    double final_precision = 0.0;
    double final_sampled_precision = 0.0;
    double final_acceptance_prob = 1.0;
    std::vector<double> final_params;

    bool operator==(const SeedRecord&) const = default;
};

/// Flat view of one run, as persisted in summary.json and results.csv.
struct RunRecord {
    std::string model;
    std::string kind;
    std::string target;
    std::optional<QnbmTopology> topology;
    unsigned iterations = 0;
    std::size_t n_params = 0;
    unsigned n_qubits = 0;
    /// Statistics are empty when every seed failed.
    std::optional<double> kl_mean, kl_std, precision_mean, precision_std;
    std::optional<double> sampled_precision_mean, sampled_precision_std;
    std::optional<std::uint64_t> best_seed;
    std::optional<double> best_kl, best_precision, best_sampled_precision, best_acceptance_prob;
    std::vector<SeedRecord> seeds;
    std::vector<SeedFailure> failures;

    bool operator==(const RunRecord& o) const;
};

RunRecord record_of(const RunResult& run);

nlohmann::json summary_json(const Study& study, const ExperimentConfig& config);
std::vector<RunRecord> parse_summary(const nlohmann::json& summary);

/// Sweep studies use the topology columns; other studies use per-model rows.
std::string results_csv(const Study& study);
std::string trace_csv(const TrainTrace& trace);
nlohmann::json dist_json(const RunResult& run);

/// Writes results.csv, summary.json, per-seed traces, best-seed
/// distributions and SVG plots into `out`, each file atomically.
void write_study(const Study& study, const ExperimentConfig& config, const std::filesystem::path& out);

/// "errors" cell: "seed 3: message; seed 4: message".
std::string errors_cell(const std::vector<SeedFailure>& failures);

}  // namespace qnbm::experiments
