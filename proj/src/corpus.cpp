#include "greenscore/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "greenscore/csv.hpp"
#include "greenscore/text.hpp"
#include "greenscore/util.hpp"

namespace greenscore {

namespace {

const char* kFields[] = {"company_id", "company_name", "country", "sector",
                         "year",       "question_id",  "question_text", "answer_text"};

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string canonicalize_sector(const std::string& raw,
                                const std::map<std::string, std::string>& sector_map) {
    std::string label = trim(raw);
    if (auto it = sector_map.find(label); it != sector_map.end()) return it->second;
    if (is_canonical_sector(label)) return label;
    return "Other";
}

}  // namespace

const std::vector<std::string>& canonical_sectors() {
    static const std::vector<std::string> kSectors = {
        "Manufacturing & Heavy Industry",
        "Chemicals, Pharmaceuticals & Materials",
        "Food, Agriculture & Consumer Goods",
        "Technology, Media & Communications",
        "Transportation & Logistics",
        "Other",
    };
    return kSectors;
}

bool is_canonical_sector(const std::string& sector) {
    const auto& all = canonical_sectors();
    return std::find(all.begin(), all.end(), sector) != all.end();
}

Corpus::Corpus(std::vector<DisclosureRecord> records, CorpusProvenance provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {
    std::set<int> years;
    for (const auto& r : records_) years.insert(r.year);
    years_.assign(years.begin(), years.end());
}

std::set<std::string> Corpus::company_ids() const {
    std::set<std::string> out;
    for (const auto& r : records_) out.insert(r.company_id);
    return out;
}

std::string Corpus::canonical_dump() const {
    std::string out;
    for (const auto& r : records_) {
        out += csv_join({r.company_id, r.company_name, r.country, r.sector,
                         std::to_string(r.year), r.question_id, r.question_text,
                         r.answer_text});
    }
    return out;
}

std::map<std::string, std::string> load_sector_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sector map: " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto pos = t.find("->");
        if (pos == std::string::npos)
            throw ConfigError("sector map line missing '->': " + t);
        std::string raw = trim(t.substr(0, pos));
        std::string canonical = trim(t.substr(pos + 2));
        if (!is_canonical_sector(canonical))
            throw ConfigError("sector map target is not a canonical group: " + canonical);
        out[raw] = canonical;
    }
    return out;
}

LoadResult load_corpus(const std::filesystem::path& path, const CorpusSchema& schema) {
    if (!std::filesystem::exists(path))
        throw ConfigError("corpus file not found: " + path.string());

    CsvReader reader(path);
    std::vector<std::string> header;
    if (!reader.next(header))
        throw ConfigError("corpus file is empty (no header): " + path.string());

    // resolve the column index of every canonical field
    std::map<std::string, std::size_t> column_index;
    for (const char* field : kFields) {
        std::string mapped = field;
        if (auto it = schema.columns.find(field); it != schema.columns.end())
            mapped = it->second;
        auto pos = std::find(header.begin(), header.end(), mapped);
        if (pos == header.end())
            throw ConfigError("required column missing from header: " + mapped);
        column_index[field] = static_cast<std::size_t>(pos - header.begin());
    }

    LoadResult result;
    std::vector<DisclosureRecord> records;
    std::set<std::tuple<std::string, int, std::string>> seen_keys;
    CorpusProvenance prov;
    prov.source_path = path.string();
    prov.loaded_at = now_iso8601();

    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;  // blank trailing line
        ++prov.rows_total;
        std::size_t row_number = reader.record_number();
        if (row.size() != header.size()) {
            result.rejects.push_back({row_number, "wrong column count"});
            continue;
        }
        auto field = [&](const char* name) -> const std::string& {
            return row[column_index.at(name)];
        };

        DisclosureRecord rec;
        rec.company_id = trim(field("company_id"));
        if (rec.company_id.empty()) {
            result.rejects.push_back({row_number, "missing company_id"});
            continue;
        }
        const std::string year_text = trim(field("year"));
        try {
            std::size_t used = 0;
            rec.year = std::stoi(year_text, &used);
            if (used != year_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            result.rejects.push_back({row_number, "invalid year: " + year_text});
            continue;
        }
        if (rec.year < schema.year_min || rec.year > schema.year_max) {
            result.rejects.push_back({row_number, "year out of window"});
            continue;
        }
        rec.question_id = trim(field("question_id"));
        auto key = std::make_tuple(rec.company_id, rec.year, rec.question_id);
        if (!seen_keys.insert(key).second) {
            result.rejects.push_back(
                {row_number, "duplicate (company_id, year, question_id)"});
            continue;
        }
        if (!schema.question_allowlist.empty()) {
            auto it = schema.question_allowlist.find(rec.year);
            if (it == schema.question_allowlist.end() ||
                it->second.find(rec.question_id) == it->second.end()) {
                ++prov.rows_filtered;
                continue;
            }
        }
        rec.company_name = trim(field("company_name"));
        rec.country = trim(field("country"));
        rec.sector = canonicalize_sector(field("sector"), schema.sector_map);
        rec.question_text = field("question_text");
        rec.answer_text = field("answer_text");
        records.push_back(std::move(rec));
    }

    prov.rows_rejected = result.rejects.size();
    prov.rows_accepted = records.size();
    if (records.empty()) throw ConfigError("zero valid rows in corpus: " + path.string());

    result.corpus = Corpus(std::move(records), std::move(prov));
    return result;
}

std::map<int, YearSlice> partition_by_year(const Corpus& corpus) {
    std::map<int, YearSlice> slices;
    for (const auto& r : corpus.records()) {
        YearSlice& s = slices[r.year];
        s.year = r.year;
        s.by_company[r.company_id].push_back(r);
        ++s.record_count;
    }
    return slices;
}

std::set<std::string> consistent_participants(const Corpus& corpus) {
    std::map<int, std::set<std::string>> per_year;
    for (const auto& r : corpus.records()) per_year[r.year].insert(r.company_id);
    std::set<std::string> out;
    bool first = true;
    for (const auto& [year, companies] : per_year) {
        if (first) {
            out = companies;
            first = false;
        } else {
            std::set<std::string> next;
            std::set_intersection(out.begin(), out.end(), companies.begin(),
                                  companies.end(), std::inserter(next, next.begin()));
            out = std::move(next);
        }
    }
    return out;
}

ParticipationStats participation_counts(const Corpus& corpus, GroupBy group_by) {
    std::map<std::pair<std::string, int>, std::set<std::string>> companies;
    for (const auto& r : corpus.records()) {
        const std::string& group = (group_by == GroupBy::country) ? r.country : r.sector;
        companies[{group, r.year}].insert(r.company_id);
    }
    ParticipationStats stats;
    for (const auto& [key, ids] : companies)
        stats.counts[key] = static_cast<int>(ids.size());
    return stats;
}

WordFrequencyTable top_k_words(const Corpus& corpus, std::size_t k,
                               const std::set<std::string>& stopwords) {
    if (k < 1) throw ConfigError("top_k_words: k must be >= 1");
    std::map<std::pair<std::string, int>, std::map<std::string, std::int64_t>> counts;
    for (const auto& r : corpus.records()) {
        auto& group = counts[{r.country, r.year}];
        for (auto& token : tokenize(r.answer_text)) {
            if (stopwords.count(token)) continue;
            ++group[token];
        }
    }
    WordFrequencyTable table;
    for (const auto& [key, token_counts] : counts) {
        std::vector<std::pair<std::string, std::int64_t>> items(token_counts.begin(),
                                                                token_counts.end());
        std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second > y.second;
            return x.first < y.first;
        });
        if (items.size() > k) items.resize(k);
        table.entries[key] = std::move(items);
    }
    return table;
}

}  // namespace greenscore
