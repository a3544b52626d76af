#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fjrec/content.hpp"
#include "fjrec/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fjrec;

namespace {

Corpus parse(const std::string& text) {
    std::istringstream in(text);
    return read_corpus_csv(in);
}

const std::string kHeader = "id,label,fear,disgust,anxiety,shock,negativity,subjectivity,score";

ContentItem item(std::string id, double score, int t_c = 0, Label label = Label::truthful) {
    ContentItem c;
    c.id = std::move(id);
    c.score = score;
    c.t_c = t_c;
    c.label = label;
    return c;
}

}  // namespace

TEST_CASE("aggregate score") {
    Dimensions ones;
    ones.fill(1.0);
    CHECK(aggregate_score(ones) == doctest::Approx(1.0).epsilon(1e-15));
    Dimensions half;
    half.fill(0.5);
    CHECK(aggregate_score(half) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(aggregate_score(Dimensions{1, 0, 0, 0, 0, 0}) == 0.15);
    CHECK(aggregate_score(Dimensions{0, 0, 0, 0, 0, 1}) == 0.20);
    CHECK_THROWS_AS(aggregate_score(Dimensions{1.1, 0, 0, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(aggregate_score(Dimensions{0, 0, 0, 0, -0.1, 0}), DomainError);
}

TEST_CASE("synthetic corpus") {
    SUBCASE("label means") {
        for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
            const Corpus c = synthesize_corpus(SynthesisParams{}, seed);
            REQUIRE(c.size() == 4000);
            const CorpusStats s = corpus_stats(c);
            CHECK(s.n_false == 2000);
            CHECK(s.n_true == 2000);
            CHECK(std::abs(s.false_mean - 0.537) <= 0.02);
            CHECK(std::abs(s.true_mean - 0.379) <= 0.02);
            for (const auto& it : c.items) {
                CHECK(it.score >= 0.0);
                CHECK(it.score <= 1.0);
                REQUIRE(it.dims.has_value());
                CHECK(aggregate_score(*it.dims) == it.score);
            }
        }
    }
    SUBCASE("false scores exceed true scores on average") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const CorpusStats s = corpus_stats(synthesize_corpus(SynthesisParams{.n_items = 1000}, seed));
            CHECK(s.false_mean > s.true_mean);
        }
    }
    SUBCASE("boundary fraction") {
        const Corpus c = synthesize_corpus(SynthesisParams{.n_items = 100, .false_fraction = 0.0}, 4);
        CHECK(std::none_of(c.items.begin(), c.items.end(), [](const ContentItem& i) { return i.is_false(); }));
    }
    SUBCASE("determinism") {
        const Corpus a = synthesize_corpus(SynthesisParams{.n_items = 500}, 8);
        const Corpus b = synthesize_corpus(SynthesisParams{.n_items = 500}, 8);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a.items[k].id == b.items[k].id);
            CHECK(a.items[k].score == b.items[k].score);
            CHECK(a.items[k].label == b.items[k].label);
        }
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(synthesize_corpus(SynthesisParams{.concentration = 0.0}, 1), DomainError);
        CHECK_THROWS_AS(synthesize_corpus(SynthesisParams{.false_fraction = 1.5}, 1), DomainError);
        CHECK_THROWS_AS(synthesize_corpus(SynthesisParams{.false_mean = 1.0}, 1), DomainError);
    }
}

TEST_CASE("corpus ingestion") {
    SUBCASE("all-ones row") {
        const Corpus c = parse(kHeader + "\ns1,false,1,1,1,1,1,1,1.0\n");
        REQUIRE(c.size() == 1);
        CHECK(c.items[0].id == "s1");
        CHECK(c.items[0].is_false());
        CHECK(c.items[0].score == doctest::Approx(1.0).epsilon(1e-15));
        CHECK_FALSE(c.metadata.scheduled);
    }
    SUBCASE("score disagreeing with its dimensions") {
        try {
            (void)parse(kHeader + "\ns1,true,1,0,0,0,0,0,0.15\ns2,true,1,0,0,0,0,0,0.9\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.row() == 3);
        }
    }
    SUBCASE("header only") {
        CHECK(parse(kHeader + "\n").size() == 0);
        CHECK(parse("").size() == 0);
    }
    SUBCASE("bare scores and a schedule column") {
        const Corpus c = parse(kHeader + ",t_c\na,true,,,,,,,0.25,3\nb,false,,,,,,,0.75,0\n");
        REQUIRE(c.size() == 2);
        CHECK(c.metadata.scheduled);
        CHECK_FALSE(c.items[0].dims.has_value());
        CHECK(c.items[0].score == 0.25);
        CHECK(c.items[0].t_c == 3);
    }
    SUBCASE("malformed rows carry their row number") {
        const auto row_of = [](const std::string& text) -> std::optional<std::size_t> {
            try {
                (void)parse(text);
            } catch (const ParseError& e) {
                return e.row();
            }
            return std::nullopt;
        };
        CHECK(row_of(kHeader + "\na,true,,,,,,,0.5\nb,maybe,,,,,,,0.5\n") == 3);
        CHECK(row_of(kHeader + "\na,true,,,,,,,0.5,7\n") == 2);
        CHECK(row_of(kHeader + "\na,true,0.5,,,,,,0.5\n") == 2);
        CHECK(row_of(kHeader + "\na,true,,,,,,,x\n") == 2);
        CHECK(row_of(kHeader + "\na,true,,,,,,,0.5\na,true,,,,,,,0.5\n") == 3);
        CHECK(row_of("id,score\n") == 1);
    }
}

TEST_CASE("corpus round trip is identity on item fields") {
    Corpus c = schedule_appearances(synthesize_corpus(SynthesisParams{.n_items = 300}, 21), 100, 5);
    c.items[3].dims.reset();
    c.items[3].score = 0.123456789012345678;
    const auto path = std::filesystem::temp_directory_path() / "fjrec_test_corpus.csv";
    save_corpus(c, path);
    const Corpus back = ingest_corpus(path);
    std::filesystem::remove(path);
    REQUIRE(back.size() == c.size());
    CHECK(back.metadata.scheduled);
    for (std::size_t k = 0; k < c.size(); ++k) {
        CHECK(back.items[k].id == c.items[k].id);
        CHECK(back.items[k].label == c.items[k].label);
        CHECK(back.items[k].dims == c.items[k].dims);
        CHECK(back.items[k].score == c.items[k].score);
        CHECK(back.items[k].t_c == c.items[k].t_c);
    }
}

TEST_CASE("appearance schedule") {
    const Corpus base = synthesize_corpus(SynthesisParams{}, 1);
    double total_mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Corpus c = schedule_appearances(base, 100, seed);
        std::vector<int> counts(100, 0);
        for (const auto& it : c.items) {
            REQUIRE(it.t_c >= 0);
            REQUIRE(it.t_c < 100);
            ++counts[static_cast<std::size_t>(it.t_c)];
        }
        double mean = 0.0;
        for (int v : counts) mean += v;
        mean /= 100.0;
        total_mean += mean;
        CHECK(std::abs(mean - 40.0) <= 2.0);
        // counts are spread over the horizon, not bunched
        CHECK(*std::max_element(counts.begin(), counts.end()) < 80);
    }
    CHECK(std::abs(total_mean / 10.0 - 40.0) <= 2.0);

    const Corpus single = schedule_appearances(base, 1, 3);
    CHECK(std::all_of(single.items.begin(), single.items.end(), [](const ContentItem& i) { return i.t_c == 0; }));

    const Corpus a = schedule_appearances(base, 100, 9);
    const Corpus b = schedule_appearances(base, 100, 9);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.items[k].t_c == b.items[k].t_c);
    CHECK(a.metadata.scheduled);
    CHECK(a.metadata.schedule_seed == 9);
    CHECK_THROWS_AS(schedule_appearances(base, 0, 1), DomainError);
}

TEST_CASE("eligibility window") {
    Corpus c;
    c.items = {item("a", 0.1, 0), item("b", 0.2, 0), item("c", 0.3, 2), item("d", 0.4, 6)};
    c.metadata.scheduled = true;

    auto ids = [](const std::vector<const ContentItem*>& v) {
        std::vector<std::string> out;
        for (const auto* p : v) out.push_back(p->id);
        return out;
    };
    CHECK(ids(eligible(c, 0, 5)) == std::vector<std::string>{"a", "b"});
    CHECK(ids(eligible(c, 5, 5)) == std::vector<std::string>{"a", "b", "c"});
    CHECK(ids(eligible(c, 6, 5)) == std::vector<std::string>{"c", "d"});
    CHECK(ids(eligible(c, 8, 5)) == std::vector<std::string>{"d"});
    CHECK(ids(eligible(c, 6, 100)) == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("discrete selection") {
    SUBCASE("nearest score without penalty") {
        const std::vector<ContentItem> items{item("lo", 0.2), item("hi", 0.6)};
        const std::vector<const ContentItem*> cand{&items[0], &items[1]};
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(5, 0.21);
        CHECK(select_discrete(x, 0.21, cand, 0, CostParams{}).id == "lo");
    }
    SUBCASE("dominant penalty picks the calmest item") {
        const std::vector<ContentItem> items{item("a", 0.9), item("b", 0.05), item("c", 0.5)};
        const std::vector<const ContentItem*> cand{&items[0], &items[1], &items[2]};
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.95);
        CHECK(select_discrete(x, 0.0, cand, 0, CostParams{.rho = 1e6}).id == "b");
    }
    SUBCASE("ties") {
        const std::vector<ContentItem> items{item("z", 0.5, 1), item("y", 0.5, 2), item("x", 0.5, 2)};
        const std::vector<const ContentItem*> cand{&items[0], &items[1], &items[2]};
        CHECK(select_discrete(Eigen::VectorXd::Constant(2, 0.5), 0.5, cand, 3, CostParams{}).id == "x");
    }
    SUBCASE("empty candidate set") {
        CHECK_THROWS_AS(select_discrete(Eigen::VectorXd::Zero(2), 0.0, {}, 0, CostParams{}), NoContentError);
    }
    SUBCASE("exhaustive oracle") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const int t = 10;
            std::vector<ContentItem> items;
            for (int k = 0; k < 1 + trial % 30; ++k)
                items.push_back(item("i" + std::to_string(k), unit(rng), t - static_cast<int>(unit(rng) * 6)));
            std::vector<const ContentItem*> cand;
            for (const auto& i : items) cand.push_back(&i);
            const Eigen::VectorXd x = gen::random_state(rng, 1 + trial % 12);
            const CostParams p{.rho = 3.0 * unit(rng), .delta_novelty = unit(rng), .window_z = 5};
            const ContentItem& chosen = select_discrete(x, 0.0, cand, t, p);
            const double chosen_cost = oracle::direct_mitigation_cost(x, chosen.score, p.rho, p.delta_novelty, t - chosen.t_c);
            for (const auto& other : items)
                CHECK(chosen_cost <= oracle::direct_mitigation_cost(x, other.score, p.rho, p.delta_novelty, t - other.t_c) + 1e-12);
        }
    }
}
