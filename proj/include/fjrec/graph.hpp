#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fjrec/validation.hpp"

namespace fjrec {

struct NetworkMetadata {
    std::string generator;         // "network_a", "network_b", "file", "manual"
    std::uint64_t seed = 0;
    nlohmann::json parameters = nlohmann::json::object();
};

// Users plus the recommender channel.
//
// Row i of [w | w_rec] holds the weights user i puts on its in-neighbours and on the
// recommender; the stubbornness lambda_i weights the user's own initial state x0_i.
struct Network {
    Eigen::MatrixXd w;
    Eigen::VectorXd w_rec;
    Eigen::VectorXd lambda;
    Eigen::VectorXd x0;
    NetworkMetadata metadata;

    Eigen::Index n() const noexcept { return x0.size(); }
};

// Connectivity and initial-condition law for the random network family.
// Defaults are the 100-user configuration.
struct NetworkAParams {
    int n = 100;
    double kappa_u = 0.25;     // P(edge j -> i) for each ordered user pair
    double kappa_r = 0.80;     // P(recommender -> i)
    double lambda_low = 0.00;
    double lambda_high = 0.05;
    double beta_alpha = 7.0;   // x0_i ~ Beta(beta_alpha, beta_beta)
    double beta_beta = 2.0;
};

inline constexpr std::uint64_t kNetworkADefaultSeed = 42;
inline constexpr std::uint64_t kNetworkBTopologySeed = 3;
inline constexpr Eigen::Index kNetworkBRadicalUser = 4;
inline constexpr int kMaxIncomingResamples = 64;

// Samples each user's in-neighbourhood independently (user edges with kappa_u, the
// recommender edge with kappa_r) and spreads weight 1 equally over the realised
// edges. Users are drawn from their own RNG substreams, so enlarging n leaves the
// stubbornness and initial state of existing users unchanged.
//
// Throws GenerationError if a user still has no incoming edge after
// kMaxIncomingResamples attempts, DomainError on invalid parameters.
Network generate_network_a(const NetworkAParams& params, std::uint64_t seed);

// Six-user network with one fully stubborn radical user (index kNetworkBRadicalUser,
// x0 = 1). Topology and the other users' stubbornness come from generate_network_a
// with the default connectivity, under kNetworkBTopologySeed unless overridden.
Network network_b();
Network network_b(std::uint64_t topology_seed);

// Empty report iff all entries are in range, there are no self loops and every row of
// [w | w_rec] sums to at most one. Users with no incoming weight (and lambda < 1) are
// reported as warnings.
ValidationReport validate(const Network& net);

inline constexpr double kRowSumTolerance = 1e-12;

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace fjrec
