#include "fjrec/scenario.hpp"

#include <fstream>
#include <set>

#include "fjrec/errors.hpp"

namespace fjrec {

namespace {

using json = nlohmann::json;

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

NetworkSpec parse_network(const json& j, const std::filesystem::path& base) {
    require_object(j, "network",
                   {"generator", "file", "seed", "n", "kappa_u", "kappa_r", "lambda_low", "lambda_high", "beta_alpha",
                    "beta_beta"});
    NetworkSpec spec;
    if (j.contains("file")) {
        if (j.contains("generator")) throw ConfigError("network: give either 'generator' or 'file', not both");
        spec.kind = NetworkSpec::Kind::file;
        spec.file = resolve(base, j.at("file").get<std::string>());
        if (j.size() != 1) throw ConfigError("network: 'file' takes no other keys");
        return spec;
    }
    std::string gen = "a";
    read_opt(j, "generator", gen, "network");
    if (gen == "a") spec.kind = NetworkSpec::Kind::network_a;
    else if (gen == "b") spec.kind = NetworkSpec::Kind::network_b;
    else throw ConfigError("network.generator must be 'a' or 'b'");

    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    auto& p = spec.params;
    read_opt(j, "n", p.n, "network");
    read_opt(j, "kappa_u", p.kappa_u, "network");
    read_opt(j, "kappa_r", p.kappa_r, "network");
    read_opt(j, "lambda_low", p.lambda_low, "network");
    read_opt(j, "lambda_high", p.lambda_high, "network");
    read_opt(j, "beta_alpha", p.beta_alpha, "network");
    read_opt(j, "beta_beta", p.beta_beta, "network");
    if (spec.kind == NetworkSpec::Kind::network_b && j.size() > (j.contains("seed") ? 2u : 1u))
        throw ConfigError("network: generator 'b' only accepts 'seed'");
    return spec;
}

CorpusSpec parse_corpus(const json& j, const std::filesystem::path& base) {
    require_object(j, "corpus",
                   {"file", "size", "false_fraction", "false_mean", "true_mean", "concentration", "seed",
                    "schedule_seed"});
    CorpusSpec spec;
    if (j.contains("file")) spec.file = resolve(base, j.at("file").get<std::string>());
    auto& s = spec.synthesis;
    read_opt(j, "size", s.n_items, "corpus");
    read_opt(j, "false_fraction", s.false_fraction, "corpus");
    read_opt(j, "false_mean", s.false_mean, "corpus");
    read_opt(j, "true_mean", s.true_mean, "corpus");
    read_opt(j, "concentration", s.concentration, "corpus");
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("schedule_seed")) spec.schedule_seed = j.at("schedule_seed").get<std::uint64_t>();
    return spec;
}

}  // namespace

const char* to_string(Controller c) {
    switch (c) {
        case Controller::baseline: return "baseline";
        case Controller::mf: return "mf";
        case Controller::mb: return "mb";
    }
    return "?";
}

const char* to_string(Mode m) {
    return m == Mode::continuous ? "continuous" : "discrete";
}

CostParams ScenarioConfig::effective_cost() const {
    CostParams c = cost;
    if (controller == Controller::baseline) c.rho = 0.0;
    return c;
}

ScenarioConfig scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
    require_object(j, "config",
                   {"schema_version", "network", "controller", "mode", "cost", "mpc", "tau", "corpus", "empty_policy",
                    "seed", "output_dir"});
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
        j.at("schema_version").get<int>() != kConfigSchemaVersion)
        throw ConfigError("config: schema_version must be " + std::to_string(kConfigSchemaVersion));

    ScenarioConfig cfg;
    try {
        if (j.contains("network")) cfg.network = parse_network(j.at("network"), base_dir);

        std::string controller = "mf";
        read_opt(j, "controller", controller, "config");
        if (controller == "baseline") cfg.controller = Controller::baseline;
        else if (controller == "mf") cfg.controller = Controller::mf;
        else if (controller == "mb") cfg.controller = Controller::mb;
        else throw ConfigError("config.controller must be baseline, mf or mb");

        std::string mode = "continuous";
        read_opt(j, "mode", mode, "config");
        if (mode == "continuous") cfg.mode = Mode::continuous;
        else if (mode == "discrete") cfg.mode = Mode::discrete;
        else throw ConfigError("config.mode must be continuous or discrete");

        if (j.contains("cost")) {
            const auto& c = j.at("cost");
            require_object(c, "cost", {"rho", "delta_novelty", "window_z"});
            read_opt(c, "rho", cfg.cost.rho, "cost");
            read_opt(c, "delta_novelty", cfg.cost.delta_novelty, "cost");
            read_opt(c, "window_z", cfg.cost.window_z, "cost");
        }
        if (j.contains("mpc")) {
            const auto& m = j.at("mpc");
            require_object(m, "mpc", {"horizon", "terminal_weight", "kkt_tolerance", "max_iterations"});
            read_opt(m, "horizon", cfg.mpc.horizon, "mpc");
            read_opt(m, "terminal_weight", cfg.mpc.terminal_weight, "mpc");
            read_opt(m, "kkt_tolerance", cfg.mpc.kkt_tolerance, "mpc");
            read_opt(m, "max_iterations", cfg.mpc.max_iterations, "mpc");
        }
        cfg.tau = cfg.network.kind == NetworkSpec::Kind::network_b ? 50 : 100;
        read_opt(j, "tau", cfg.tau, "config");
        if (j.contains("corpus")) cfg.corpus = parse_corpus(j.at("corpus"), base_dir);

        std::string empty = "hold";
        read_opt(j, "empty_policy", empty, "config");
        if (empty == "hold") cfg.empty_policy = EmptyPolicy::hold_previous;
        else if (empty == "zero") cfg.empty_policy = EmptyPolicy::zero;
        else throw ConfigError("config.empty_policy must be hold or zero");

        read_opt(j, "seed", cfg.seed, "config");
        std::string out = "out";
        read_opt(j, "output_dir", out, "config");
        cfg.output_dir = resolve(base_dir, out);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cfg.tau < 1) throw ConfigError("config.tau must be >= 1");
    if (cfg.mode == Mode::discrete && !cfg.corpus) throw ConfigError("config: discrete mode requires a corpus block");
    try {
        check(cfg.cost);
        check(cfg.mpc);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return scenario_from_json(j, path.parent_path());
}

json to_json(const ScenarioConfig& cfg) {
    json net;
    switch (cfg.network.kind) {
        case NetworkSpec::Kind::file: net = {{"file", cfg.network.file.string()}}; break;
        case NetworkSpec::Kind::network_b: net = {{"generator", "b"}}; break;
        case NetworkSpec::Kind::network_a: {
            const auto& p = cfg.network.params;
            net = {{"generator", "a"},           {"n", p.n},
                   {"kappa_u", p.kappa_u},       {"kappa_r", p.kappa_r},
                   {"lambda_low", p.lambda_low}, {"lambda_high", p.lambda_high},
                   {"beta_alpha", p.beta_alpha}, {"beta_beta", p.beta_beta}};
            break;
        }
    }
    if (cfg.network.seed) net["seed"] = *cfg.network.seed;

    json j{{"schema_version", kConfigSchemaVersion},
           {"network", net},
           {"controller", to_string(cfg.controller)},
           {"mode", to_string(cfg.mode)},
           {"cost", {{"rho", cfg.cost.rho}, {"delta_novelty", cfg.cost.delta_novelty}, {"window_z", cfg.cost.window_z}}},
           {"mpc",
            {{"horizon", cfg.mpc.horizon},
             {"terminal_weight", cfg.mpc.terminal_weight},
             {"kkt_tolerance", cfg.mpc.kkt_tolerance},
             {"max_iterations", cfg.mpc.max_iterations}}},
           {"tau", cfg.tau},
           {"empty_policy", cfg.empty_policy == EmptyPolicy::hold_previous ? "hold" : "zero"},
           {"seed", cfg.seed},
           {"output_dir", cfg.output_dir.string()}};
    if (cfg.corpus) {
        const auto& c = *cfg.corpus;
        json cj;
        if (c.file) {
            cj["file"] = c.file->string();
        } else {
            cj = {{"size", c.synthesis.n_items},
                  {"false_fraction", c.synthesis.false_fraction},
                  {"false_mean", c.synthesis.false_mean},
                  {"true_mean", c.synthesis.true_mean},
                  {"concentration", c.synthesis.concentration}};
        }
        if (c.seed) cj["seed"] = *c.seed;
        if (c.schedule_seed) cj["schedule_seed"] = *c.schedule_seed;
        j["corpus"] = cj;
    }
    return j;
}

}  // namespace fjrec
