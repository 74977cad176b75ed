#include <chrono>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qnbm/experiments.hpp"
#include "qnbm/io.hpp"
#include "qnbm/verify.hpp"

namespace {

using namespace qnbm;
using experiments::ConfigError;
using experiments::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
    std::string config;
    std::string out;
    std::string seeds;
    std::string shots;
    unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON experiment config");
    cmd->add_option("--out", f.out, "Output directory (default results/<command>)");
    cmd->add_option("--seeds", f.seeds, "Comma-separated training seeds, e.g. 0,1,2,3,4");
    cmd->add_option("--shots", f.shots, "Shots per loss evaluation, or 'exact'");
    cmd->add_option("--jobs", f.jobs, "Worker threads for independent runs")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const CommonFlags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : experiments::load_config(f.config);
    if (!f.seeds.empty()) c.seeds = experiments::parse_seed_list(f.seeds);
    if (!f.shots.empty()) c.shots = experiments::parse_shots(f.shots);
    if (f.jobs > 0) c.jobs = f.jobs;
    return c;
}

std::string fmt(double x, const char* spec = "%.4f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

int run_verify(const ExperimentConfig& c, const std::filesystem::path& out) {
    verify::Options opt;
    if (c.verify_flip_controlled_sign) opt.circuit.controlled_angle = -std::numbers::pi;
    const auto start = std::chrono::steady_clock::now();
    const verify::Report report = verify::run(opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json doc;
    doc["passed"] = report.passed();
    doc["flip_controlled_sign"] = c.verify_flip_controlled_sign;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& ch : report.checks) {
        std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  cases=" << ch.cases
                  << "  max_error=" << fmt(ch.max_error, "%.3e") << "  tolerance=" << fmt(ch.tolerance, "%.0e") << "\n";
        checks.push_back({{"name", ch.name},
                          {"cases", ch.cases},
                          {"max_error", ch.max_error},
                          {"tolerance", ch.tolerance},
                          {"passed", ch.passed}});
    }
    doc["checks"] = std::move(checks);
    io::write_atomic(out / "verify.json", doc.dump(2) + "\n");
    std::cout << (report.passed() ? "all checks passed" : "verification FAILED") << " in " << fmt(secs, "%.1f")
              << " s\n";
    return report.passed() ? kExitOk : kExitFailure;
}

int run_study(const std::string& name, const ExperimentConfig& c, const std::filesystem::path& out) {
    std::vector<experiments::RunSpec> runs;
    if (name == "train") runs = experiments::train_runs(c);
    if (name == "sweep") runs = experiments::sweep_runs(c);
    if (name == "compare") runs = experiments::compare_runs(c);
    if (name == "appendix") runs = experiments::appendix_runs(c);
    std::cerr << name << ": " << runs.size() << " runs x " << c.seeds.size() << " seeds, "
              << (c.shots ? std::to_string(*c.shots) + " shots" : std::string("exact")) << ", " << c.jobs
              << " job(s)\n";
    const auto study = experiments::execute(name, runs, c, [](const std::string& line) { std::cerr << line << "\n"; });
    experiments::write_study(study, c, out);

    bool failed = false;
    std::cout << "model                 target              kl_mean    kl_std    prec_mean  best_kl    best_prec\n";
    for (const auto& run : study.runs) {
        const auto r = experiments::record_of(run);
        char line[256];
        if (r.kl_mean) {
            std::snprintf(line, sizeof line, "%-21s %-19s %-10.4f %-9.4f %-10.4f %-10.4f %.4f", r.model.c_str(),
                          r.target.c_str(), *r.kl_mean, *r.kl_std, *r.precision_mean, *r.best_kl, *r.best_precision);
        } else {
            std::snprintf(line, sizeof line, "%-21s %-19s all seeds failed", r.model.c_str(), r.target.c_str());
        }
        std::cout << line << "\n";
        if (!r.failures.empty()) {
            failed = true;
            std::cout << "  errors: " << experiments::errors_cell(r.failures) << "\n";
        }
    }
    std::cout << "wrote " << out.string() << "\n";
    return failed ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum neuron Born machine experiments"};
    app.require_subcommand(1);
    CommonFlags flags;
    const char* names[] = {"verify", "train", "sweep", "compare", "appendix"};
    const char* help[] = {
        "Run the correctness checks",
        "Train one model on one target",
        "Network-design sweep over QNBM topologies",
        "QNBM vs QCBM on uniform and cardinality targets",
        "Two-layer QCBM and linearized QNBM ablations",
    };
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], help[i]), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const ExperimentConfig config = resolve(flags);
        const std::filesystem::path out = flags.out.empty() ? std::filesystem::path("results") / command
                                                          : std::filesystem::path(flags.out);
        if (command == "verify") return run_verify(config, out);
        return run_study(command, config, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
