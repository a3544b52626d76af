#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "fjrec/content.hpp"
#include "fjrec/control.hpp"
#include "fjrec/costfn.hpp"
#include "fjrec/graph.hpp"

namespace fjrec {

inline constexpr int kConfigSchemaVersion = 1;

enum class Controller { baseline, mf, mb };
enum class Mode { continuous, discrete };
// What the recommender applies when no content is eligible.
enum class EmptyPolicy { hold_previous, zero };

struct NetworkSpec {
    enum class Kind { network_a, network_b, file };
    Kind kind = Kind::network_a;
    NetworkAParams params;               // network_a only
    std::optional<std::uint64_t> seed;   // defaults to the master seed (network_a) or the fixed topology seed (network_b)
    std::filesystem::path file;
};

struct CorpusSpec {
    std::optional<std::filesystem::path> file;
    SynthesisParams synthesis;
    std::optional<std::uint64_t> seed;           // defaults to derive_seed(master, kCorpusPurpose)
    std::optional<std::uint64_t> schedule_seed;  // defaults to derive_seed(master, kSchedulePurpose)
};

struct ScenarioConfig {
    NetworkSpec network;
    Controller controller = Controller::mf;
    Mode mode = Mode::continuous;
    CostParams cost;
    MpcConfig mpc;
    int tau = 100;
    std::optional<CorpusSpec> corpus;
    EmptyPolicy empty_policy = EmptyPolicy::hold_previous;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    // rho actually used by the controller: 0 for the engagement-only baseline.
    CostParams effective_cost() const;
};

inline constexpr std::uint64_t kCorpusPurpose = 2;
inline constexpr std::uint64_t kSchedulePurpose = 3;

// Ten documented master seeds used for multi-seed experiments.
inline constexpr std::uint64_t kDefaultSeeds[10] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

// Parses the JSON config document. Unknown keys, a missing or different schema_version,
// and a discrete scenario without a corpus block are ConfigErrors. Relative file paths
// resolve against base_dir.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

const char* to_string(Controller c);
const char* to_string(Mode m);

}  // namespace fjrec
