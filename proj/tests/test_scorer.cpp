#include <doctest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "greenscore/corpus.hpp"
#include "greenscore/llm/mock_backend.hpp"
#include "greenscore/llm/prompt_markers.hpp"
#include "greenscore/scorer.hpp"
#include "greenscore/util.hpp"
#include "oracles.hpp"

using namespace greenscore;

namespace {

const std::filesystem::path kFixtures = GREENSCORE_FIXTURE_DIR;

llm::GatewayOptions gateway_options(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("gs_scorer_" + name);
    std::filesystem::remove_all(dir);
    llm::GatewayOptions options;
    options.cache_dir = dir / "cache";
    options.audit_dir = dir / "audit";
    options.backoff_initial_ms = 0;
    return options;
}

LoadResult fixture_load() {
    CorpusSchema schema;
    schema.sector_map = load_sector_map(kFixtures / "sector_map.txt");
    return load_corpus(kFixtures / "corpus.csv", schema);
}

Rubric table1() { return load_rubric(kFixtures / "table1_rubric.json", "yearly:2010"); }
Rubric table2() { return load_rubric(kFixtures / "table2_rubric.json", "master"); }

DisclosureRecord record_for(const std::string& company, int year, const std::string& qid,
                            const std::string& answer) {
    DisclosureRecord r;
    r.company_id = company;
    r.year = year;
    r.question_id = qid;
    r.question_text = "How do you manage climate issues?";
    r.answer_text = answer;
    r.country = "Germany";
    r.sector = "Other";
    return r;
}

// Tracks the concurrent-call high-water mark.
class ConcurrencyProbe : public llm::Backend {
public:
    explicit ConcurrencyProbe(std::shared_ptr<llm::MockBackend> inner)
        : inner_(std::move(inner)) {}
    std::string complete(const llm::CompletionRequest& request) override {
        int now = ++in_flight_;
        int seen = peak_.load();
        while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        auto reply = inner_->complete(request);
        --in_flight_;
        return reply;
    }
    std::string name() const override { return "probe"; }
    int peak() const { return peak_.load(); }

private:
    std::shared_ptr<llm::MockBackend> inner_;
    std::atomic<int> in_flight_{0};
    std::atomic<int> peak_{0};
};

// Refuses multi-company prompts; used to exercise the chunk-halving path.
class SingleOnlyBackend : public llm::Backend {
public:
    explicit SingleOnlyBackend(std::shared_ptr<llm::MockBackend> inner)
        : inner_(std::move(inner)) {}
    std::string complete(const llm::CompletionRequest& request) override {
        if (count_occurrences(request.user_text, llm::kCompanyMarker) > 1)
            return "that is too many companies for me";
        return inner_->complete(request);
    }
    std::string name() const override { return "single-only"; }

private:
    std::shared_ptr<llm::MockBackend> inner_;
};

}  // namespace

TEST_CASE("score_slice covers every company within rubric bounds") {
    auto load = fixture_load();
    auto slices = partition_by_year(load.corpus);
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(), gateway_options("bounds"));
    ScorerOptions options;

    Rubric rubric = table1();
    auto records = score_slice(slices.at(2010), rubric, gateway, options);
    REQUIRE(records.size() == 30);
    std::set<std::string> seen;
    for (const auto& r : records) {
        seen.insert(r.company_id);
        REQUIRE(r.item_scores.size() == rubric.items.size());
        int sum = 0;
        for (std::size_t i = 0; i < r.item_scores.size(); ++i) {
            CHECK(r.item_scores[i] >= 0);
            CHECK(r.item_scores[i] <= rubric.items[i].max_points);
            sum += r.item_scores[i];
        }
        CHECK(r.total == sum);
        CHECK(r.total >= 0);
        CHECK(r.total <= rubric.max_total());
        CHECK_FALSE(r.clamped);
    }
    CHECK(seen.size() == 30);

    SUBCASE("empty answers score zero") {
        // C030 has all-empty answers in 2010
        for (const auto& r : records)
            if (r.company_id == "C030") CHECK(r.total == 0);
    }
}

TEST_CASE("chunk grouping does not change per-company scores") {
    auto load = fixture_load();
    auto slices = partition_by_year(load.corpus);
    Rubric rubric = table1();

    std::map<std::string, std::vector<int>> by_chunk_size;
    for (std::size_t chunk : {3, 10, 30}) {
        llm::Gateway gateway(std::make_shared<llm::MockBackend>(),
                             gateway_options("chunk" + std::to_string(chunk)));
        ScorerOptions options;
        options.chunk_size = chunk;
        auto records = score_slice(slices.at(2011), rubric, gateway, options);
        for (const auto& r : records) {
            auto it = by_chunk_size.find(r.company_id);
            if (it == by_chunk_size.end())
                by_chunk_size[r.company_id] = r.item_scores;
            else
                CHECK(it->second == r.item_scores);
        }
    }
}

TEST_CASE("scoring fan-out never exceeds the gateway parallelism bound") {
    auto load = fixture_load();
    auto slices = partition_by_year(load.corpus);
    auto probe = std::make_shared<ConcurrencyProbe>(std::make_shared<llm::MockBackend>());
    auto options = gateway_options("fanout");
    options.max_parallel = 2;
    llm::Gateway gateway(probe, options);
    ScorerOptions scorer_options;
    scorer_options.chunk_size = 3;  // 10 chunks compete for 2 lanes
    auto records = score_slice(slices.at(2012), table1(), gateway, scorer_options);
    CHECK(records.size() == 30);
    CHECK(probe->peak() <= 2);
    CHECK(probe->peak() >= 1);
}

TEST_CASE("invalid rubric and empty slice are rejected") {
    auto load = fixture_load();
    auto slices = partition_by_year(load.corpus);
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(), gateway_options("precond"));
    Rubric broken = table1();
    broken.items[0].index = 7;
    CHECK_THROWS_AS((void)score_slice(slices.at(2010), broken, gateway, {}),
                    std::invalid_argument);
    YearSlice empty;
    CHECK_THROWS_AS((void)score_slice(empty, table1(), gateway, {}), std::invalid_argument);
}

TEST_CASE("out-of-range replies are clamped and flagged") {
    YearSlice slice;
    slice.year = 2010;
    slice.by_company["A"] = {record_for("A", 2010, "q1", "strategy answer")};
    slice.record_count = 1;

    llm::MockOptions mock_options;
    mock_options.script = {
        "```json\n{\"scores\": [{\"company_id\": \"A\", \"items\": [9, -2]}]}\n```"};
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(mock_options),
                         gateway_options("clamp"));

    Rubric rubric;
    rubric.rubric_id = "yearly:2010";
    rubric.items = {{1, "Alpha", 2, {{1, "p"}, {2, "f"}}},
                    {2, "Beta", 2, {{1, "p"}, {2, "f"}}}};
    auto records = score_slice(slice, rubric, gateway, {});
    REQUIRE(records.size() == 1);
    CHECK(records[0].item_scores == std::vector<int>{2, 0});
    CHECK(records[0].total == 2);
    CHECK(records[0].clamped);
}

TEST_CASE("unrepairable chunks halve down to single-company prompts") {
    auto load = fixture_load();
    auto slices = partition_by_year(load.corpus);
    auto inner = std::make_shared<llm::MockBackend>();
    llm::Gateway gateway(std::make_shared<SingleOnlyBackend>(inner),
                         gateway_options("split"));
    ScorerOptions options;
    options.chunk_size = 8;
    auto records = score_slice(slices.at(2010), table1(), gateway, options);
    CHECK(records.size() == 30);  // full coverage despite the fussy backend
}

TEST_CASE("mock scoring heuristic is monotone in rubric keywords") {
    Rubric rubric = table1();
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(), gateway_options("mono"));

    auto total_for = [&](const std::string& answer) {
        YearSlice slice;
        slice.year = 2010;
        slice.by_company["Z"] = {record_for("Z", 2010, "q1", answer)};
        slice.record_count = 1;
        return score_slice(slice, rubric, gateway, {}).at(0).total;
    };

    // 6 rubric keywords vs 2
    int rich = total_for("strategic integration of targets and metrics with scenario analysis");
    int poor = total_for("we mention our strategic plan integration");
    CHECK(rich > poor);

    // appending one more keyword never lowers the total
    std::string base = "governance oversight";
    int before = total_for(base);
    int after = total_for(base + " stakeholder");
    CHECK(after >= before);
}

TEST_CASE("score_all_with_master covers every company-year") {
    auto load = fixture_load();
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(), gateway_options("all"));
    ScoreMatrix matrix = score_all_with_master(load.corpus, table2(), gateway, {});
    CHECK(matrix.records.size() == 90);  // 30 companies x 3 years
    std::set<std::pair<std::string, int>> expected;
    for (const auto& r : load.corpus.records()) expected.insert({r.company_id, r.year});
    CHECK(matrix.records.size() == expected.size());
    for (const auto& key : expected) CHECK(matrix.records.count(key) == 1);
    for (const auto& [key, record] : matrix.records) {
        CHECK(record.total >= 0);
        CHECK(record.total <= 20);
    }

    SUBCASE("single-company corpus gives that company's years only") {
        std::vector<DisclosureRecord> records;
        records.push_back(record_for("Solo", 2011, "q1", "strategy integration"));
        records.push_back(record_for("Solo", 2012, "q1", "targets metrics"));
        Corpus small(records, {});
        ScoreMatrix m = score_all_with_master(small, table2(), gateway, {});
        CHECK(m.records.size() == 2);
        CHECK(m.records.count({"Solo", 2011}) == 1);
    }
}

TEST_CASE("naive longitudinal baselines") {
    auto load = fixture_load();
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(), gateway_options("naive"));
    ScorerOptions options;

    SUBCASE("variants share the same year keys") {
        auto plain = naive_longitudinal_score("C005", load.corpus, gateway,
                                              NaiveVariant::plain, 7, options);
        auto hidden = naive_longitudinal_score("C005", load.corpus, gateway,
                                               NaiveVariant::year_hidden, 7, options);
        REQUIRE(plain.series.size() == 3);
        std::vector<int> plain_years, hidden_years;
        for (const auto& [year, score] : plain.series) plain_years.push_back(year);
        for (const auto& [year, score] : hidden.series) hidden_years.push_back(year);
        CHECK(plain_years == hidden_years);
        CHECK(plain.method_id == "mock-judge:plain");
        CHECK(hidden.method_id == "mock-judge:year_hidden");
    }
    SUBCASE("shuffled runs are deterministic under a fixed seed") {
        auto a = naive_longitudinal_score("C006", load.corpus, gateway,
                                          NaiveVariant::shuffled, 99, options);
        auto b = naive_longitudinal_score("C006", load.corpus, gateway,
                                          NaiveVariant::shuffled, 99, options);
        CHECK(a.series == b.series);
    }
    SUBCASE("shuffled block scores map back to the right years") {
        // the mock scores a block purely from its text, so the shuffled series
        // must equal the year-hidden series year by year
        auto hidden = naive_longitudinal_score("C007", load.corpus, gateway,
                                               NaiveVariant::year_hidden, 5, options);
        auto shuffled = naive_longitudinal_score("C007", load.corpus, gateway,
                                                 NaiveVariant::shuffled, 5, options);
        CHECK(hidden.series == shuffled.series);
    }
    SUBCASE("single-year company violates the precondition") {
        std::vector<DisclosureRecord> records{record_for("Once", 2010, "q1", "strategy")};
        Corpus small(records, {});
        CHECK_THROWS_AS((void)naive_longitudinal_score("Once", small, gateway,
                                                       NaiveVariant::plain, 7, options),
                        std::invalid_argument);
    }
}

TEST_CASE("method correlation matrix") {
    auto series = [](std::initializer_list<std::pair<int, double>> points,
                     const std::string& id) {
        NaiveRun run;
        run.method_id = id;
        for (auto [year, score] : points) run.series[year] = score;
        return run;
    };

    SUBCASE("identical series correlate at 1") {
        auto a = series({{2010, 1}, {2011, 2}, {2012, 3}}, "a");
        auto b = series({{2010, 1}, {2011, 2}, {2012, 3}}, "b");
        auto m = method_correlation_matrix({a, b});
        CHECK(*m.cells[0][1] == doctest::Approx(1.0));
        CHECK(*m.cells[0][0] == doctest::Approx(1.0));
    }
    SUBCASE("negation about the mean correlates at -1") {
        auto a = series({{2010, 1}, {2011, 2}, {2012, 3}}, "a");
        auto b = series({{2010, 3}, {2011, 2}, {2012, 1}}, "b");
        auto m = method_correlation_matrix({a, b});
        CHECK(*m.cells[0][1] == doctest::Approx(-1.0));
    }
    SUBCASE("three synthetic series match the direct formula") {
        auto a = series({{2010, 1}, {2011, 4}, {2012, 2}, {2013, 8}}, "a");
        auto b = series({{2010, 2}, {2011, 3}, {2012, 5}, {2013, 7}}, "b");
        auto c = series({{2010, 9}, {2011, 1}, {2012, 4}, {2013, 4}}, "c");
        auto m = method_correlation_matrix({a, b, c});
        std::vector<double> va{1, 4, 2, 8}, vb{2, 3, 5, 7}, vc{9, 1, 4, 4};
        CHECK(*m.cells[0][1] ==
              doctest::Approx(oracles::correlation_direct(va, vb)).epsilon(1e-12));
        CHECK(*m.cells[0][2] ==
              doctest::Approx(oracles::correlation_direct(va, vc)).epsilon(1e-12));
        CHECK(*m.cells[1][2] ==
              doctest::Approx(oracles::correlation_direct(vb, vc)).epsilon(1e-12));
        CHECK(m.cells[1][0] == m.cells[0][1]);
    }
    SUBCASE("zero-variance series yields undefined cells") {
        auto a = series({{2010, 1}, {2011, 2}, {2012, 3}}, "a");
        auto flat = series({{2010, 5}, {2011, 5}, {2012, 5}}, "flat");
        auto m = method_correlation_matrix({a, flat});
        CHECK_FALSE(m.cells[0][1].has_value());
        CHECK_FALSE(m.cells[1][1].has_value());
        CHECK(*m.cells[0][0] == doctest::Approx(1.0));
    }
    SUBCASE("fewer than 3 common years is an error") {
        auto a = series({{2010, 1}, {2011, 2}, {2012, 3}}, "a");
        auto b = series({{2011, 2}, {2012, 3}, {2013, 4}}, "b");
        CHECK_THROWS_AS((void)method_correlation_matrix({a, b}), std::invalid_argument);
        CHECK_THROWS_AS((void)method_correlation_matrix({a}), std::invalid_argument);
    }
}

TEST_CASE("score csv round-trip") {
    auto dir = std::filesystem::temp_directory_path() / "gs_scorer_csv";
    std::filesystem::remove_all(dir);
    std::vector<ScoreRecord> records;
    ScoreRecord r;
    r.company_id = "A";
    r.year = 2010;
    r.rubric_id = "master";
    r.item_scores = {1, 2, 0};
    r.total = 3;
    r.clamped = true;
    records.push_back(r);
    write_score_csv(dir / "master.csv", records, 3);
    auto loaded = read_score_csv(dir / "master.csv", "master");
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].company_id == "A");
    CHECK(loaded[0].item_scores == std::vector<int>{1, 2, 0});
    CHECK(loaded[0].total == 3);
    CHECK(loaded[0].clamped);
}
