#include "fjrec/graph.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fjrec/errors.hpp"
#include "fjrec/rng.hpp"

namespace fjrec {

namespace {

// Per-user substreams: edges, stubbornness and initial state are drawn from separate
// streams so that each quantity is stable when n changes.
constexpr std::uint64_t kEdgeStream = 0;
constexpr std::uint64_t kLambdaStream = 1;
constexpr std::uint64_t kInitialStream = 2;
constexpr std::uint64_t kStreamsPerUser = 4;

void check_params(const NetworkAParams& p) {
    if (p.n < 2) throw DomainError("network_a: n must be at least 2");
    if (!(p.kappa_u > 0.0 && p.kappa_u <= 1.0)) throw DomainError("network_a: kappa_u must be in (0,1]");
    if (!(p.kappa_r > 0.0 && p.kappa_r <= 1.0)) throw DomainError("network_a: kappa_r must be in (0,1]");
    if (!(0.0 <= p.lambda_low && p.lambda_low <= p.lambda_high && p.lambda_high <= 1.0))
        throw DomainError("network_a: need 0 <= lambda_low <= lambda_high <= 1");
    if (!(p.beta_alpha > 0.0 && p.beta_beta > 0.0))
        throw DomainError("network_a: beta parameters must be positive");
}

Eigen::VectorXd json_vector(const nlohmann::json& j, const char* key, Eigen::Index expected) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string("network: missing array '") + key + "'");
    const auto& arr = j.at(key);
    if (static_cast<Eigen::Index>(arr.size()) != expected)
        throw ParseError(std::string("network: '") + key + "' has wrong length");
    Eigen::VectorXd v(expected);
    for (Eigen::Index i = 0; i < expected; ++i) v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

}  // namespace

Network generate_network_a(const NetworkAParams& params, std::uint64_t seed) {
    check_params(params);
    const Eigen::Index n = params.n;

    Network net;
    net.w = Eigen::MatrixXd::Zero(n, n);
    net.w_rec = Eigen::VectorXd::Zero(n);
    net.lambda.resize(n);
    net.x0.resize(n);

    const Rng master(seed, 0);
    std::vector<char> edge(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto base = static_cast<std::uint64_t>(i) * kStreamsPerUser;
        Rng edges = master.substream(base + kEdgeStream);

        bool rec = false;
        int degree = 0;
        int attempt = 0;
        for (; attempt < kMaxIncomingResamples; ++attempt) {
            degree = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                edge[static_cast<std::size_t>(j)] = (j != i) && edges.bernoulli(params.kappa_u);
                degree += edge[static_cast<std::size_t>(j)];
            }
            rec = edges.bernoulli(params.kappa_r);
            degree += rec;
            if (degree > 0) break;
        }
        if (degree == 0) {
            throw GenerationError("network_a: user " + std::to_string(i) + " has no incoming edge after " +
                                  std::to_string(kMaxIncomingResamples) + " resamples (kappa_u=" +
                                  std::to_string(params.kappa_u) + ", kappa_r=" +
                                  std::to_string(params.kappa_r) + ")");
        }

        const double weight = 1.0 / degree;
        for (Eigen::Index j = 0; j < n; ++j)
            if (edge[static_cast<std::size_t>(j)]) net.w(i, j) = weight;
        if (rec) net.w_rec[i] = weight;

        Rng stub = master.substream(base + kLambdaStream);
        net.lambda[i] = stub.uniform(params.lambda_low, params.lambda_high);
        Rng init = master.substream(base + kInitialStream);
        net.x0[i] = init.beta(params.beta_alpha, params.beta_beta);
    }

    net.metadata.generator = "network_a";
    net.metadata.seed = seed;
    net.metadata.parameters = {{"n", params.n},
                               {"kappa_u", params.kappa_u},
                               {"kappa_r", params.kappa_r},
                               {"lambda_low", params.lambda_low},
                               {"lambda_high", params.lambda_high},
                               {"beta_alpha", params.beta_alpha},
                               {"beta_beta", params.beta_beta},
                               {"rng", Rng::kScheme}};
    return net;
}

Network network_b() {
    return network_b(kNetworkBTopologySeed);
}

Network network_b(std::uint64_t topology_seed) {
    NetworkAParams params;
    params.n = 6;
    Network net = generate_network_a(params, topology_seed);
    net.x0 << 0.33, 0.26, 0.17, 0.32, 1.00, 0.41;
    net.lambda[kNetworkBRadicalUser] = 1.0;
    net.metadata.generator = "network_b";
    net.metadata.parameters["radical_user"] = kNetworkBRadicalUser;
    net.metadata.parameters.erase("beta_alpha");
    net.metadata.parameters.erase("beta_beta");
    return net;
}

ValidationReport validate(const Network& net) {
    ValidationReport report;
    const Eigen::Index n = net.n();
    if (n < 1 || net.w.rows() != n || net.w.cols() != n || net.w_rec.size() != n || net.lambda.size() != n) {
        report.add(Severity::error, "shape", "inconsistent dimensions between w, w_rec, lambda and x0");
        return report;
    }

    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!in_unit(net.w(i, j))) {
                report.add(Severity::error, "entry_range",
                           "w[" + std::to_string(i) + "][" + std::to_string(j) + "] outside [0,1]", i,
                           net.w(i, j));
            }
        }
        if (net.w(i, i) != 0.0)
            report.add(Severity::error, "self_loop", "w[" + std::to_string(i) + "][" + std::to_string(i) + "] is nonzero",
                       i, net.w(i, i));
        if (!in_unit(net.w_rec[i]))
            report.add(Severity::error, "entry_range", "w_rec[" + std::to_string(i) + "] outside [0,1]", i, net.w_rec[i]);
        if (!in_unit(net.lambda[i]))
            report.add(Severity::error, "lambda_range", "lambda[" + std::to_string(i) + "] outside [0,1]", i,
                       net.lambda[i]);
        if (!in_unit(net.x0[i]))
            report.add(Severity::error, "x0_range", "x0[" + std::to_string(i) + "] outside [0,1]", i, net.x0[i]);

        const double row = net.w.row(i).sum() + net.w_rec[i];
        if (row > 1.0 + kRowSumTolerance) {
            report.add(Severity::error, "row_sum",
                       "row " + std::to_string(i) + " of [w | w_rec] sums to " + std::to_string(row) +
                           ", excess " + std::to_string(row - 1.0),
                       i, row - 1.0);
        }
        if (row == 0.0 && net.lambda[i] < 1.0) {
            report.add(Severity::warning, "isolated", "user " + std::to_string(i) + " has no incoming weight", i);
        }
    }
    return report;
}

nlohmann::json to_json(const Network& net) {
    const Eigen::Index n = net.n();
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w.push_back(net.w(i, j));

    return nlohmann::json{
        {"format", "fjrec-network"},
        {"version", 1},
        {"n", n},
        {"w", w},
        {"w_rec", to_std(net.w_rec)},
        {"lambda", to_std(net.lambda)},
        {"x0", to_std(net.x0)},
        {"metadata",
         {{"generator", net.metadata.generator},
          {"seed", net.metadata.seed},
          {"parameters", net.metadata.parameters}}},
    };
}

Network network_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw ParseError("network: top level must be an object");
        const auto n = j.at("n").get<Eigen::Index>();
        if (n < 1) throw ParseError("network: n must be positive");

        Network net;
        const Eigen::VectorXd flat = json_vector(j, "w", n * n);
        net.w.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k) net.w(i, k) = flat[i * n + k];
        net.w_rec = json_vector(j, "w_rec", n);
        net.lambda = json_vector(j, "lambda", n);
        net.x0 = json_vector(j, "x0", n);

        if (j.contains("metadata")) {
            const auto& m = j.at("metadata");
            net.metadata.generator = m.value("generator", std::string("file"));
            net.metadata.seed = m.value("seed", std::uint64_t{0});
            if (m.contains("parameters")) net.metadata.parameters = m.at("parameters");
        } else {
            net.metadata.generator = "file";
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network: ") + e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << to_json(net).dump(2) << '\n';
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return network_from_json(j);
}

}  // namespace fjrec
