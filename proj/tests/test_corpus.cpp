#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "greenscore/corpus.hpp"
#include "greenscore/text.hpp"
#include "greenscore/util.hpp"

using namespace greenscore;

namespace {

const std::filesystem::path kFixtures = GREENSCORE_FIXTURE_DIR;

CorpusSchema fixture_schema() {
    CorpusSchema schema;
    schema.year_min = 2010;
    schema.year_max = 2020;
    schema.sector_map = load_sector_map(kFixtures / "sector_map.txt");
    return schema;
}

}  // namespace

TEST_CASE("bundled synthetic corpus loads with 360 records") {
    auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
    CHECK(result.corpus.records().size() == 360);
    CHECK(result.rejects.empty());
    CHECK(result.corpus.years() == std::vector<int>{2010, 2011, 2012});
    CHECK(result.corpus.company_ids().size() == 30);
    // every sector canonicalized
    for (const auto& r : result.corpus.records()) CHECK(is_canonical_sector(r.sector));
}

TEST_CASE("dirty rows are rejected with reasons, never aborting the load") {
    auto result = load_corpus(kFixtures / "corpus_dirty.csv", fixture_schema());
    CHECK(result.corpus.records().size() == 3);
    REQUIRE(result.rejects.size() == 5);
    std::map<std::string, int> reasons;
    for (const auto& r : result.rejects) ++reasons[r.reason];
    CHECK(reasons["year out of window"] == 1);
    CHECK(reasons["invalid year: 20xx"] == 1);
    CHECK(reasons["missing company_id"] == 1);
    CHECK(reasons["duplicate (company_id, year, question_id)"] == 1);
    CHECK(reasons["wrong column count"] == 1);
    CHECK(result.corpus.provenance().rows_rejected == 5);
}

TEST_CASE("load errors") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_corpus(kFixtures / "nope.csv", fixture_schema()),
                        ConfigError);
    }
    SUBCASE("missing mapped column") {
        CorpusSchema schema = fixture_schema();
        schema.columns["company_id"] = "NoSuchColumn";
        CHECK_THROWS_WITH_AS((void)load_corpus(kFixtures / "corpus.csv", schema),
                             doctest::Contains("NoSuchColumn"), ConfigError);
    }
    SUBCASE("empty file with valid header means zero valid rows") {
        auto tmp = std::filesystem::temp_directory_path() / "gs_empty.csv";
        std::ofstream(tmp) << "company_id,company_name,country,sector,year,question_id,"
                              "question_text,answer_text\n";
        CHECK_THROWS_WITH_AS((void)load_corpus(tmp, fixture_schema()),
                             doctest::Contains("zero valid rows"), ConfigError);
    }
    SUBCASE("window that excludes every row also means zero valid rows") {
        CorpusSchema schema = fixture_schema();
        schema.year_min = 1990;
        schema.year_max = 1991;
        CHECK_THROWS_WITH_AS((void)load_corpus(kFixtures / "corpus.csv", schema),
                             doctest::Contains("zero valid rows"), ConfigError);
    }
}

TEST_CASE("column mapping adapts arbitrary headers") {
    CorpusSchema schema;
    schema.columns = {{"company_id", "CompanyId"}, {"company_name", "Name"},
                      {"country", "Nation"},       {"sector", "Industry"},
                      {"year", "FY"},              {"question_id", "QID"},
                      {"question_text", "QText"},  {"answer_text", "AText"}};
    auto result = load_corpus(kFixtures / "corpus_renamed.csv", schema);
    CHECK(result.corpus.records().size() == 3);
    CHECK(result.corpus.records()[0].company_id == "X1");
    CHECK(result.corpus.records()[0].sector == "Other");  // unmapped raw label
}

TEST_CASE("question allowlist filters rows without rejecting them") {
    CorpusSchema schema = fixture_schema();
    for (int year : {2010, 2011, 2012}) schema.question_allowlist[year] = {"q1", "q2"};
    auto result = load_corpus(kFixtures / "corpus.csv", schema);
    CHECK(result.corpus.records().size() == 180);
    CHECK(result.rejects.empty());
    CHECK(result.corpus.provenance().rows_filtered == 180);
}

TEST_CASE("load determinism: the same file twice dumps identically") {
    auto a = load_corpus(kFixtures / "corpus.csv", fixture_schema());
    auto b = load_corpus(kFixtures / "corpus.csv", fixture_schema());
    CHECK(a.corpus.canonical_dump() == b.corpus.canonical_dump());
    CHECK(a.corpus.records() == b.corpus.records());
}

TEST_CASE("partition by year") {
    auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
    auto slices = partition_by_year(result.corpus);
    REQUIRE(slices.size() == 3);
    // per-year counts match the fixture manifest
    for (int year : {2010, 2011, 2012}) CHECK(slices.at(year).record_count == 120);

    SUBCASE("partition completeness: slices reproduce the record multiset") {
        std::multiset<std::string> original, recombined;
        for (const auto& r : result.corpus.records())
            original.insert(r.company_id + "|" + std::to_string(r.year) + "|" + r.question_id);
        std::size_t total = 0;
        for (const auto& [year, slice] : slices) {
            total += slice.record_count;
            for (const auto& [company, records] : slice.by_company)
                for (const auto& r : records) {
                    CHECK(r.year == year);
                    CHECK(r.company_id == company);
                    recombined.insert(r.company_id + "|" + std::to_string(r.year) + "|" +
                                      r.question_id);
                }
        }
        CHECK(total == result.corpus.records().size());
        CHECK(original == recombined);
    }
}

TEST_CASE("consistent participants") {
    SUBCASE("company missing one year is excluded") {
        std::vector<DisclosureRecord> records;
        auto add = [&](const std::string& id, int year) {
            DisclosureRecord r;
            r.company_id = id;
            r.year = year;
            r.question_id = "q1";
            r.country = "Germany";
            r.sector = "Other";
            records.push_back(r);
        };
        add("A", 2010);
        add("A", 2011);
        add("B", 2010);
        Corpus corpus(records, {});
        CHECK(consistent_participants(corpus) == std::set<std::string>{"A"});
    }
    SUBCASE("single-year corpus keeps all companies") {
        std::vector<DisclosureRecord> records;
        for (const char* id : {"A", "B", "C"}) {
            DisclosureRecord r;
            r.company_id = id;
            r.year = 2015;
            records.push_back(r);
        }
        Corpus corpus(records, {});
        CHECK(consistent_participants(corpus) == std::set<std::string>{"A", "B", "C"});
    }
    SUBCASE("subset of companies and equals the per-year intersection") {
        auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
        auto consistent = consistent_participants(result.corpus);
        auto all = result.corpus.company_ids();
        CHECK(std::includes(all.begin(), all.end(), consistent.begin(), consistent.end()));
        // fixture companies all appear in all 3 years
        CHECK(consistent.size() == 30);
    }
}

TEST_CASE("participation counts") {
    auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());

    SUBCASE("three German companies in 2010") {
        auto stats = participation_counts(result.corpus, GroupBy::country);
        CHECK(stats.counts.at({"Germany", 2010}) == 3);
        CHECK(stats.counts.count({"France", 2010}) == 0);  // absent key, not zero
    }
    SUBCASE("sector overlap: per-sector sums can exceed the company total") {
        auto stats = participation_counts(result.corpus, GroupBy::sector);
        int sum_2010 = 0;
        for (const auto& [key, count] : stats.counts)
            if (key.second == 2010) sum_2010 += count;
        // C015 reports under two sectors, so the sum exceeds 30
        CHECK(sum_2010 == 31);
    }
}

TEST_CASE("top-k word frequency") {
    SUBCASE("direct count with tie-break") {
        std::vector<DisclosureRecord> records;
        auto add = [&](const std::string& answer) {
            DisclosureRecord r;
            r.company_id = "A";
            r.year = 2010;
            r.country = "Germany";
            r.question_id = "q" + std::to_string(records.size());
            r.answer_text = answer;
            records.push_back(r);
        };
        add("carbon carbon price");
        add("carbon");
        Corpus corpus(records, {});
        auto table = top_k_words(corpus, 2);
        auto& entry = table.entries.at({"Germany", 2010});
        REQUIRE(entry.size() == 2);
        CHECK(entry[0] == std::pair<std::string, std::int64_t>{"carbon", 3});
        CHECK(entry[1] == std::pair<std::string, std::int64_t>{"price", 1});
    }
    SUBCASE("empty answers give an empty entry list") {
        std::vector<DisclosureRecord> records(1);
        records[0].company_id = "A";
        records[0].year = 2010;
        records[0].country = "Japan";
        Corpus corpus(records, {});
        auto table = top_k_words(corpus, 3);
        CHECK(table.entries.at({"Japan", 2010}).empty());
    }
    SUBCASE("count conservation: top-k counts never exceed the tokenizer total") {
        auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
        auto table = top_k_words(result.corpus, 100000);  // k larger than vocabulary
        std::map<std::pair<std::string, int>, std::int64_t> token_totals;
        for (const auto& r : result.corpus.records())
            token_totals[{r.country, r.year}] +=
                static_cast<std::int64_t>(tokenize(r.answer_text).size());
        for (const auto& [key, entries] : table.entries) {
            std::int64_t total = 0;
            for (const auto& [token, count] : entries) total += count;
            CHECK(total == token_totals[key]);
        }
    }
    SUBCASE("stopwords are dropped") {
        auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
        auto with = top_k_words(result.corpus, 2, {"our", "we", "the"});
        for (const auto& [key, entries] : with.entries)
            for (const auto& [token, count] : entries) CHECK(token != "our");
    }
    SUBCASE("k must be positive") {
        auto result = load_corpus(kFixtures / "corpus.csv", fixture_schema());
        CHECK_THROWS_AS((void)top_k_words(result.corpus, 0), ConfigError);
    }
}

TEST_CASE("random corpora satisfy the partition identity") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DisclosureRecord> records;
        std::size_t n = 1 + rng() % 60;
        for (std::size_t i = 0; i < n; ++i) {
            DisclosureRecord r;
            r.company_id = "C" + std::to_string(rng() % 8);
            r.year = 2010 + static_cast<int>(rng() % 5);
            r.question_id = "q" + std::to_string(i);
            records.push_back(r);
        }
        Corpus corpus(records, {});
        auto slices = partition_by_year(corpus);
        std::size_t total = 0;
        std::set<int> slice_years;
        for (const auto& [year, slice] : slices) {
            total += slice.record_count;
            slice_years.insert(year);
        }
        CHECK(total == corpus.records().size());
        CHECK(std::vector<int>(slice_years.begin(), slice_years.end()) == corpus.years());
    }
}
