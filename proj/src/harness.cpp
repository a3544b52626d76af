#include "fjrec/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "fjrec/control.hpp"
#include "fjrec/errors.hpp"
#include "fjrec/numfmt.hpp"
#include "fjrec/rng.hpp"

namespace fjrec {

namespace {

std::string shortest(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

Eigen::VectorXd shifted(const Eigen::VectorXd& seq) {
    Eigen::VectorXd out(seq.size());
    const Eigen::Index n = seq.size();
    out.head(n - 1) = seq.tail(n - 1);
    out[n - 1] = seq[n - 1];
    return out;
}

}  // namespace

PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
    PreparedScenario p;
    switch (cfg.network.kind) {
        case NetworkSpec::Kind::network_a:
            p.network = generate_network_a(cfg.network.params, cfg.network.seed.value_or(cfg.seed));
            p.network_type = "a";
            break;
        case NetworkSpec::Kind::network_b:
            p.network = cfg.network.seed ? network_b(*cfg.network.seed) : network_b();
            p.network_type = "b";
            break;
        case NetworkSpec::Kind::file:
            p.network = load_network(cfg.network.file);
            p.network_type = "file";
            break;
    }
    p.matrices = build_matrices(p.network);

    if (cfg.mode == Mode::discrete) {
        const CorpusSpec& spec = cfg.corpus.value();
        Corpus corpus = spec.file ? ingest_corpus(*spec.file)
                                  : synthesize_corpus(spec.synthesis, spec.seed.value_or(derive_seed(cfg.seed, kCorpusPurpose)));
        if (!corpus.metadata.scheduled) {
            corpus = schedule_appearances(corpus, cfg.tau,
                                          spec.schedule_seed.value_or(derive_seed(cfg.seed, kSchedulePurpose)));
        }
        p.corpus = std::move(corpus);
    }
    return p;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    return run_scenario(cfg, prepare_scenario(cfg));
}

RunResult run_scenario(const ScenarioConfig& cfg, const PreparedScenario& prepared) {
    const CostParams cost = cfg.effective_cost();
    check(cost);
    const SystemMatrices& m = prepared.matrices;
    if (cfg.mode == Mode::discrete && !prepared.corpus) throw ConfigError("discrete mode requires a corpus");

    RunResult result;
    RunDiagnostics& diag = result.diagnostics;
    if (cost.delta_novelty == 0.0) {
        diag.spectral_radius = spectral_radius_check(m, cost, 0);
        if (*diag.spectral_radius >= 1.0)
            diag.warnings.push_back("model-free closed-loop spectral radius " + format_double(*diag.spectral_radius) +
                                    " >= 1; convergence not guaranteed");
    }

    std::optional<CondensedMpc> mpc;
    if (cfg.controller == Controller::mb) {
        const SteadyState target = mb_steady_state(m, cost, 0);
        mpc.emplace(m, target, cost, 0, cfg.mpc);
    }

    Trajectory& traj = result.trajectory;
    traj.states.reserve(static_cast<std::size_t>(cfg.tau) + 1);
    traj.states.push_back(prepared.network.x0);
    std::optional<Eigen::VectorXd> warm;
    double u_prev = 0.0;

    for (int t = 0; t < cfg.tau; ++t) {
        try {
            const Eigen::VectorXd& x = traj.states.back();
            double target = 0.0;
            if (mpc) {
                const MpcSolution sol = mpc->solve(x, warm);
                target = sol.controls[0];
                warm = shifted(sol.controls);
                diag.qp_iterations += sol.iterations;
                diag.max_kkt_residual = std::max(diag.max_kkt_residual, sol.kkt_residual);
            } else {
                target = mf_control(x, t, t, cost);
            }

            double u = target;
            std::optional<std::string> id;
            if (cfg.mode == Mode::discrete) {
                const auto candidates = eligible(*prepared.corpus, t, cost.window_z);
                if (candidates.empty()) {
                    u = cfg.empty_policy == EmptyPolicy::hold_previous ? u_prev : 0.0;
                    ++diag.empty_steps;
                } else {
                    const ContentItem& item = select_discrete(x, target, candidates, t, cost);
                    u = item.score;
                    id = item.id;
                }
            }

            traj.targets.push_back(target);
            traj.controls.push_back(u);
            traj.content_ids.push_back(std::move(id));
            traj.states.push_back(step(m, x, u));
            u_prev = u;
        } catch (const RunError&) {
            throw;
        } catch (const std::exception& e) {
            throw RunError(t, e.what());
        }
    }

    try {
        result.metrics = compute_metrics(traj, cfg.mode == Mode::discrete ? &*prepared.corpus : nullptr, cost.rho);
    } catch (const std::exception& e) {
        throw RunError(cfg.tau, e.what());
    }
    return result;
}

std::vector<double> rho_grid(double rho_min, double rho_max, double rho_step) {
    if (!(rho_step > 0.0)) throw DomainError("rho_step must be > 0");
    if (!(rho_min <= rho_max)) throw DomainError("rho_min must be <= rho_max");
    if (rho_min < 0.0) throw DomainError("rho_min must be >= 0");
    const auto count = static_cast<long>(std::floor((rho_max - rho_min) / rho_step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) grid.push_back(rho_min + static_cast<double>(k) * rho_step);
    return grid;
}

SweepReport run_sweep(const ScenarioConfig& cfg, double rho_min, double rho_max, double rho_step, int jobs,
                      bool write_runs) {
    const std::vector<double> grid = rho_grid(rho_min, rho_max, rho_step);
    const PreparedScenario prepared = prepare_scenario(cfg);

    SweepReport report;
    report.entries.resize(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next.fetch_add(1); k < grid.size(); k = next.fetch_add(1)) {
            SweepEntry& entry = report.entries[k];
            entry.rho = grid[k];
            ScenarioConfig run_cfg = cfg;
            run_cfg.cost.rho = grid[k];
            try {
                RunResult res = run_scenario(run_cfg, prepared);
                entry.metrics = res.metrics;
                if (write_runs) write_run(res, run_cfg, prepared, validate_scenario(run_cfg, prepared));
            } catch (const std::exception& e) {
                entry.error = e.what();
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<RunMetrics> ok;
    for (const auto& e : report.entries)
        if (e.metrics) ok.push_back(*e.metrics);
    report.pareto = pareto_points(ok);
    return report;
}

ValidationReport validate_scenario(const ScenarioConfig& cfg, const std::vector<double>& rhos) {
    ValidationReport report;
    try {
        const PreparedScenario prepared = prepare_scenario(cfg);
        return validate_scenario(cfg, prepared, rhos);
    } catch (const std::exception& e) {
        report.add(Severity::error, "prepare", e.what());
    }
    return report;
}

ValidationReport validate_scenario(const ScenarioConfig& cfg, const PreparedScenario& prepared,
                                   const std::vector<double>& rhos_in) {
    ValidationReport report;
    report.merge(validate(prepared.network), "network");
    if (report.has_errors()) return report;

    std::vector<double> rhos = rhos_in;
    if (rhos.empty()) rhos.push_back(cfg.effective_cost().rho);

    const auto n = static_cast<int>(prepared.network.n());
    for (double rho : rhos) {
        CostParams cost = cfg.cost;
        cost.rho = cfg.controller == Controller::baseline ? 0.0 : rho;
        const std::string at = "rho=" + shortest(cost.rho);

        if (cost.delta_novelty == 0.0) {
            try {
                const double radius = spectral_radius_check(prepared.matrices, cost, 0);
                if (radius >= 1.0)
                    report.add(Severity::error, "spectral_radius",
                               at + ": model-free closed-loop spectral radius " + format_double(radius) + " >= 1",
                               std::nullopt, radius);
            } catch (const NumericalError& e) {
                report.add(Severity::error, "spectral_radius", at + ": " + e.what());
            }
        }

        const double h_min = h_matrix_min_eigenvalue(n, cost.rho, cost.delta_novelty, 0);
        if (!(h_min > 1e-12)) {
            report.add(Severity::warning, "h_psd_only",
                       at + ": H matrix is positive semidefinite only (minimum eigenvalue " + format_double(h_min) + ")",
                       std::nullopt, h_min);
        }

        if (cfg.controller == Controller::mb) {
            try {
                const SteadyState s = mb_steady_state(prepared.matrices, cost, 0);
                const double residual = steady_state_residual(prepared.matrices, s);
                if (residual > 1e-10)
                    report.add(Severity::error, "mb_steady_state", at + ": equilibrium residual " + format_double(residual),
                               std::nullopt, residual);
            } catch (const NumericalError& e) {
                report.add(Severity::error, "mb_steady_state", at + ": " + e.what());
            }
        }
    }

    if (prepared.corpus) {
        const CorpusStats s = corpus_stats(*prepared.corpus);
        if (prepared.corpus->items.empty()) {
            report.add(Severity::error, "corpus_empty", "corpus contains no items");
        } else {
            if (s.n_false == 0 || s.n_true == 0)
                report.add(Severity::warning, "label_balance",
                           "corpus has " + std::to_string(s.n_false) + " false and " + std::to_string(s.n_true) +
                               " true items");
            if (s.n_false > 0 && s.n_true > 0 && s.false_mean < s.true_mean)
                report.add(Severity::warning, "corpus_separation",
                           "mean score of false items (" + format_double(s.false_mean) +
                               ") is below that of true items (" + format_double(s.true_mean) + ")",
                           std::nullopt, s.false_mean - s.true_mean);
        }
    }
    return report;
}

std::string run_id(const ScenarioConfig& cfg) {
    return std::string(to_string(cfg.controller)) + "_" + to_string(cfg.mode) + "_rho" + shortest(cfg.cost.rho) +
           "_seed" + std::to_string(cfg.seed);
}

nlohmann::json metrics_json(const RunResult& result, const ScenarioConfig& cfg, const PreparedScenario& prepared) {
    const RunMetrics& m = result.metrics;
    const RunDiagnostics& d = result.diagnostics;
    nlohmann::json prov{{"seed", cfg.seed},
                        {"network", prepared.network_type},
                        {"network_seed", prepared.network.metadata.seed},
                        {"controller", to_string(cfg.controller)},
                        {"mode", to_string(cfg.mode)},
                        {"tau", cfg.tau},
                        {"rng", Rng::kScheme}};
    if (prepared.corpus) {
        prov["corpus_source"] = prepared.corpus->metadata.source;
        prov["corpus_seed"] = prepared.corpus->metadata.seed;
        prov["schedule_seed"] = prepared.corpus->metadata.schedule_seed;
        prov["corpus_size"] = prepared.corpus->size();
    }
    nlohmann::json warnings = d.warnings;
    return nlohmann::json{
        {"rho", m.rho},
        {"misinformation", optional_json(m.misinformation)},
        {"sentiment_shift_mean", m.sentiment_shift_mean},
        {"sentiment_shift_median", m.sentiment_shift_median},
        {"engagement_cost_mean", m.engagement_cost_mean},
        {"engagement_cost_median", m.engagement_cost_median},
        {"provenance", prov},
        {"diagnostics",
         {{"spectral_radius", optional_json(d.spectral_radius)},
          {"empty_steps", d.empty_steps},
          {"qp_iterations", d.qp_iterations},
          {"max_kkt_residual", d.max_kkt_residual},
          {"warnings", warnings}}},
    };
}

std::filesystem::path write_run(const RunResult& result, const ScenarioConfig& cfg, const PreparedScenario& prepared,
                                const ValidationReport& validation) {
    const std::filesystem::path dir = cfg.output_dir / run_id(cfg);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "trajectory.csv");
        write_trajectory_csv(result.trajectory, out);
    }
    {
        std::ofstream out(dir / "metrics.json");
        out << metrics_json(result, cfg, prepared).dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "validation.json");
        out << validation.to_json().dump(2) << '\n';
    }
    return dir;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "rho,misinformation,engagement_cost_mean,engagement_cost_median,sentiment_shift_mean,"
           "sentiment_shift_median,non_dominated,error\n";
    for (const auto& e : report.entries) {
        out << format_double(e.rho) << ',';
        if (e.metrics) {
            const RunMetrics& m = *e.metrics;
            if (m.misinformation) out << format_double(*m.misinformation);
            out << ',' << format_double(m.engagement_cost_mean) << ',' << format_double(m.engagement_cost_median) << ','
                << format_double(m.sentiment_shift_mean) << ',' << format_double(m.sentiment_shift_median) << ',';
            bool nd = false;
            for (const auto& p : report.pareto)
                if (p.rho == e.rho) nd = p.non_dominated;
            out << (nd ? "1" : "0") << ',';
        } else {
            out << ",,,,,,";
            std::string msg = e.error.value_or("");
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            out << msg;
        }
        out << '\n';
    }
}

}  // namespace fjrec
