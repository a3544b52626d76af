#include "fjrec/content.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "fjrec/errors.hpp"
#include "fjrec/numfmt.hpp"
#include "fjrec/rng.hpp"

namespace fjrec {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

double parse_double(const std::string& s, std::size_t row, const char* field) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError(std::string("invalid number '") + s + "' in column " + field, row);
    return v;
}

int parse_int(const std::string& s, std::size_t row) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
        throw ParseError("invalid t_c '" + s + "'", row);
    return v;
}

const std::string kHeader = "id,label,fear,disgust,anxiety,shock,negativity,subjectivity,score";

}  // namespace

const char* to_string(Label label) {
    return label == Label::fabricated ? "false" : "true";
}

double aggregate_score(const Dimensions& dims) {
    double score = 0.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!(dims[k] >= 0.0 && dims[k] <= 1.0))
            throw DomainError(std::string("aggregate_score: ") + kDimensionNames[k] + " outside [0,1]");
        score += kDimensionWeights[k] * dims[k];
    }
    return std::clamp(score, 0.0, 1.0);
}

Corpus synthesize_corpus(const SynthesisParams& params, std::uint64_t seed) {
    if (!(params.concentration > 0.0)) throw DomainError("synthesize_corpus: concentration must be > 0");
    if (!(params.false_mean > 0.0 && params.false_mean < 1.0) || !(params.true_mean > 0.0 && params.true_mean < 1.0))
        throw DomainError("synthesize_corpus: means must lie in (0,1)");
    if (!(params.false_fraction >= 0.0 && params.false_fraction <= 1.0))
        throw DomainError("synthesize_corpus: false_fraction must lie in [0,1]");

    const auto n_false =
        static_cast<std::size_t>(std::llround(static_cast<double>(params.n_items) * params.false_fraction));
    const int width = static_cast<int>(std::to_string(params.n_items > 0 ? params.n_items - 1 : 0).size());

    Corpus corpus;
    corpus.metadata = CorpusMetadata{"synthetic", seed, false, 0};
    corpus.items.reserve(params.n_items);
    const Rng master(seed, 0);
    for (std::size_t k = 0; k < params.n_items; ++k) {
        const bool fabricated = k < n_false;
        const double mean = fabricated ? params.false_mean : params.true_mean;
        Rng rng = master.substream(k);

        ContentItem item;
        std::string digits = std::to_string(k);
        item.id = "syn-" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
        item.label = fabricated ? Label::fabricated : Label::truthful;
        item.score = rng.beta(mean * params.concentration, (1.0 - mean) * params.concentration);
        item.dims = Dimensions{};
        item.dims->fill(item.score);
        // keeps the stored score identical to what ingestion recomputes from the dims
        item.score = aggregate_score(*item.dims);
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

Corpus read_corpus_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return Corpus{{}, CorpusMetadata{"ingested", 0, false, 0}};
    if (!line.empty() && line.back() == '\r') line.pop_back();

    bool has_tc = false;
    if (line == kHeader + ",t_c") has_tc = true;
    else if (line != kHeader) throw ParseError("unexpected header '" + line + "'", 1);

    Corpus corpus;
    corpus.metadata = CorpusMetadata{"ingested", 0, has_tc, 0};
    std::set<std::string> ids;
    const std::size_t columns = has_tc ? 10 : 9;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != columns)
            throw ParseError("expected " + std::to_string(columns) + " fields, got " + std::to_string(f.size()), row);

        ContentItem item;
        item.id = f[0];
        if (item.id.empty()) throw ParseError("empty id", row);
        if (!ids.insert(item.id).second) throw ParseError("duplicate id '" + item.id + "'", row);

        if (f[1] == "true") item.label = Label::truthful;
        else if (f[1] == "false") item.label = Label::fabricated;
        else throw ParseError("label must be 'true' or 'false', got '" + f[1] + "'", row);

        std::size_t empty_dims = 0;
        for (std::size_t k = 2; k < 8; ++k) empty_dims += f[k].empty();
        if (empty_dims != 0 && empty_dims != 6) throw ParseError("dimension columns must be all present or all empty", row);

        const bool has_score = !f[8].empty();
        if (empty_dims == 0) {
            Dimensions dims{};
            for (std::size_t k = 0; k < 6; ++k) {
                dims[k] = parse_double(f[k + 2], row, kDimensionNames[k]);
                if (!(dims[k] >= 0.0 && dims[k] <= 1.0))
                    throw ValidationError(std::string(kDimensionNames[k]) + " outside [0,1]", row);
            }
            const double computed = aggregate_score(dims);
            if (has_score) {
                const double stored = parse_double(f[8], row, "score");
                if (std::abs(stored - computed) > kScoreTolerance)
                    throw ValidationError("stored score " + f[8] + " disagrees with dimensions (" +
                                              format_double(computed) + ")",
                                          row);
            }
            item.dims = dims;
            item.score = computed;
        } else {
            if (!has_score) throw ParseError("row has neither dimensions nor score", row);
            item.score = parse_double(f[8], row, "score");
            if (!(item.score >= 0.0 && item.score <= 1.0)) throw ValidationError("score outside [0,1]", row);
        }
        if (has_tc) item.t_c = parse_int(f[9], row);
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

Corpus ingest_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_corpus_csv(in);
}

void write_corpus_csv(const Corpus& corpus, std::ostream& out) {
    const bool with_tc = corpus.metadata.scheduled;
    out << kHeader << (with_tc ? ",t_c" : "") << '\n';
    for (const auto& item : corpus.items) {
        out << item.id << ',' << to_string(item.label);
        for (std::size_t k = 0; k < 6; ++k) {
            out << ',';
            if (item.dims) out << format_double((*item.dims)[k]);
        }
        out << ',' << format_double(item.score);
        if (with_tc) out << ',' << item.t_c;
        out << '\n';
    }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_corpus_csv(corpus, out);
}

Corpus schedule_appearances(const Corpus& corpus, int tau, std::uint64_t seed) {
    if (tau < 1) throw DomainError("schedule_appearances: tau must be >= 1");
    Corpus out = corpus;
    const Rng master(seed, 0);
    for (std::size_t k = 0; k < out.items.size(); ++k) {
        Rng rng = master.substream(k);
        out.items[k].t_c = static_cast<int>(rng.below(static_cast<std::uint64_t>(tau)));
    }
    out.metadata.scheduled = true;
    out.metadata.schedule_seed = seed;
    return out;
}

std::vector<const ContentItem*> eligible(const Corpus& corpus, int t, int z) {
    std::vector<const ContentItem*> out;
    for (const auto& item : corpus.items)
        if (item.t_c <= t && t - item.t_c <= z) out.push_back(&item);
    return out;
}

const ContentItem& select_discrete(const Eigen::Ref<const Eigen::VectorXd>& x, double /*u_target*/,
                                   const std::vector<const ContentItem*>& candidates, int t,
                                   const CostParams& params) {
    if (candidates.empty()) throw NoContentError("select_discrete: no eligible content at t=" + std::to_string(t));
    const ContentItem* best = nullptr;
    double best_cost = 0.0;
    for (const ContentItem* item : candidates) {
        const double cost = mitigation_cost(x, item->score, t, item->t_c, params);
        const bool better = best == nullptr || cost < best_cost ||
                            (cost == best_cost && (item->t_c > best->t_c ||
                                                   (item->t_c == best->t_c && item->id < best->id)));
        if (better) {
            best = item;
            best_cost = cost;
        }
    }
    return *best;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats s;
    double sum_false = 0.0;
    double sum_true = 0.0;
    for (const auto& item : corpus.items) {
        if (item.is_false()) {
            ++s.n_false;
            sum_false += item.score;
        } else {
            ++s.n_true;
            sum_true += item.score;
        }
    }
    s.false_mean = s.n_false ? sum_false / static_cast<double>(s.n_false) : 0.0;
    s.true_mean = s.n_true ? sum_true / static_cast<double>(s.n_true) : 0.0;
    return s;
}

}  // namespace fjrec
