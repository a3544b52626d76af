#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fjrec/costfn.hpp"

namespace fjrec {

enum class Label { truthful, fabricated };

// fear, disgust, anxiety, shock, negativity, subjectivity
using Dimensions = std::array<double, 6>;
inline constexpr Dimensions kDimensionWeights{0.15, 0.15, 0.15, 0.15, 0.20, 0.20};
inline constexpr std::array<const char*, 6> kDimensionNames{"fear",  "disgust",    "anxiety",
                                                            "shock", "negativity", "subjectivity"};

struct ContentItem {
    std::string id;
    Label label = Label::truthful;
    std::optional<Dimensions> dims;
    double score = 0.0;  // emotional extremity in [0,1]
    int t_c = 0;         // appearance time step

    bool is_false() const noexcept { return label == Label::fabricated; }
};

struct CorpusMetadata {
    std::string source = "synthetic";  // "synthetic" | "ingested"
    std::uint64_t seed = 0;
    bool scheduled = false;            // t_c values are meaningful
    std::uint64_t schedule_seed = 0;
};

struct Corpus {
    std::vector<ContentItem> items;
    CorpusMetadata metadata;

    std::size_t size() const noexcept { return items.size(); }
};

// Weighted sum of the six dimensions. Throws DomainError if any is outside [0,1].
double aggregate_score(const Dimensions& dims);

struct SynthesisParams {
    std::size_t n_items = 4000;
    double false_fraction = 0.5;
    double false_mean = 0.537;
    double true_mean = 0.379;
    double concentration = 10.0;  // alpha + beta of each label's score distribution
};

// Scores ~ Beta(mean * concentration, (1 - mean) * concentration) per label. The first
// round(n_items * false_fraction) items are false. Dims replicate the score.
Corpus synthesize_corpus(const SynthesisParams& params, std::uint64_t seed);

// CSV: id,label,fear,disgust,anxiety,shock,negativity,subjectivity,score[,t_c]
// Dimension fields may be left empty as a group, in which case the score is taken
// as-is; otherwise the score is recomputed and rows whose stored score disagrees by more
// than kScoreTolerance are rejected with ValidationError. A t_c column marks the corpus
// as scheduled.
inline constexpr double kScoreTolerance = 1e-6;
Corpus read_corpus_csv(std::istream& in);
Corpus ingest_corpus(const std::filesystem::path& path);
void write_corpus_csv(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Copy of the corpus with every t_c drawn uniformly from {0, ..., tau-1}; item k uses
// RNG substream k.
Corpus schedule_appearances(const Corpus& corpus, int tau, std::uint64_t seed);

// Items with t_c <= t and t - t_c <= z, in corpus order.
std::vector<const ContentItem*> eligible(const Corpus& corpus, int t, int z);

// Candidate minimising the mitigation cost at its own age; ties go to the newer item,
// then to the lexicographically smaller id. u_target is informational only.
// Throws NoContentError on an empty candidate set.
const ContentItem& select_discrete(const Eigen::Ref<const Eigen::VectorXd>& x, double u_target,
                                   const std::vector<const ContentItem*>& candidates, int t,
                                   const CostParams& params);

struct CorpusStats {
    std::size_t n_false = 0;
    std::size_t n_true = 0;
    double false_mean = 0.0;
    double true_mean = 0.0;
};

CorpusStats corpus_stats(const Corpus& corpus);

const char* to_string(Label label);

}  // namespace fjrec
