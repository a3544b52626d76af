// Command-line front end: simulate, sweep, gen-network, gen-corpus, validate.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fjrec/content.hpp"
#include "fjrec/errors.hpp"
#include "fjrec/graph.hpp"
#include "fjrec/harness.hpp"
#include "fjrec/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

int simulate(const std::string& config, std::optional<double> rho, std::optional<std::uint64_t> seed) {
    fjrec::ScenarioConfig cfg = fjrec::load_scenario(config);
    if (rho) cfg.cost.rho = *rho;
    if (seed) cfg.seed = *seed;

    const fjrec::PreparedScenario prepared = fjrec::prepare_scenario(cfg);
    const fjrec::ValidationReport validation = fjrec::validate_scenario(cfg, prepared);
    for (const auto& issue : validation.issues)
        std::cerr << fjrec::to_string(issue.severity) << ": " << issue.message << '\n';

    const fjrec::RunResult result = fjrec::run_scenario(cfg, prepared);
    for (const auto& w : result.diagnostics.warnings) std::cerr << "warning: " << w << '\n';
    const auto dir = fjrec::write_run(result, cfg, prepared, validation);
    std::cout << dir.string() << '\n';
    return kExitOk;
}

int sweep(const std::string& config, double rho_min, double rho_max, double rho_step, int jobs,
          std::optional<std::uint64_t> seed) {
    fjrec::ScenarioConfig cfg = fjrec::load_scenario(config);
    if (seed) cfg.seed = *seed;
    const fjrec::SweepReport report = fjrec::run_sweep(cfg, rho_min, rho_max, rho_step, jobs, true);

    std::filesystem::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / "sweep.csv";
    std::ofstream out(path);
    fjrec::write_sweep_csv(report, out);
    std::size_t failed = 0;
    for (const auto& e : report.entries) {
        if (e.error) {
            ++failed;
            std::cerr << "rho=" << e.rho << ": " << *e.error << '\n';
        }
    }
    std::cout << path.string() << '\n';
    return failed == 0 ? kExitOk : kExitRuntime;
}

int validate(const std::string& config) {
    const fjrec::ScenarioConfig cfg = fjrec::load_scenario(config);
    const fjrec::ValidationReport report = fjrec::validate_scenario(cfg);
    std::cout << report.to_json().dump(2) << '\n';
    return report.has_errors() ? kExitInvalid : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop Friedkin-Johnsen recommender simulator with misinformation mitigation"};
    app.require_subcommand(1);

    std::string config;
    std::optional<double> rho;
    std::optional<std::uint64_t> seed;

    auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
    sim->add_option("--config", config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("--rho", rho, "Override the penalty strength");
    sim->add_option("--seed", seed, "Override the master seed");

    double rho_min = 0.0;
    double rho_max = 5.5;
    double rho_step = 0.1;
    int jobs = 1;
    auto* sw = app.add_subcommand("sweep", "Run the scenario over a grid of penalty strengths");
    sw->add_option("--config", config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sw->add_option("--rho-min", rho_min)->required();
    sw->add_option("--rho-max", rho_max)->required();
    sw->add_option("--rho-step", rho_step)->required();
    sw->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sw->add_option("--seed", seed, "Override the master seed");

    std::string type = "a";
    std::string out;
    std::optional<int> n;
    auto* gn = app.add_subcommand("gen-network", "Write a generated network as JSON");
    gn->add_option("--type", type)->required()->check(CLI::IsMember({"a", "b"}));
    gn->add_option("--out", out)->required();
    gn->add_option("--seed", seed);
    gn->add_option("--n", n, "Number of users (type a)");

    fjrec::SynthesisParams synth;
    std::optional<int> tau;
    auto* gc = app.add_subcommand("gen-corpus", "Write a synthetic scored corpus as CSV");
    gc->add_option("--out", out)->required();
    gc->add_option("--size", synth.n_items)->capture_default_str();
    gc->add_option("--false-mean", synth.false_mean)->capture_default_str();
    gc->add_option("--true-mean", synth.true_mean)->capture_default_str();
    gc->add_option("--false-fraction", synth.false_fraction)->capture_default_str();
    gc->add_option("--concentration", synth.concentration)->capture_default_str();
    gc->add_option("--tau", tau, "Also schedule appearance times over tau steps (adds a t_c column)");
    gc->add_option("--seed", seed);

    auto* val = app.add_subcommand("validate", "Check a scenario config without running it");
    val->add_option("--config", config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitRuntime;
    }

    try {
        if (*sim) return simulate(config, rho, seed);
        if (*sw) return sweep(config, rho_min, rho_max, rho_step, jobs, seed);
        if (*val) return validate(config);
        if (*gn) {
            fjrec::Network net;
            if (type == "a") {
                fjrec::NetworkAParams params;
                if (n) params.n = *n;
                net = fjrec::generate_network_a(params, seed.value_or(fjrec::kNetworkADefaultSeed));
            } else {
                net = seed ? fjrec::network_b(*seed) : fjrec::network_b();
            }
            fjrec::save_network(net, out);
            return kExitOk;
        }
        if (*gc) {
            const std::uint64_t s = seed.value_or(1);
            fjrec::Corpus corpus = fjrec::synthesize_corpus(synth, s);
            if (tau) corpus = fjrec::schedule_appearances(corpus, *tau, s);
            fjrec::save_corpus(corpus, out);
            return kExitOk;
        }
    } catch (const fjrec::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
