#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace greenscore {

/// One company-year-question-answer row of the disclosure corpus.
struct DisclosureRecord {
    std::string company_id;
    std::string company_name;
    std::string country;
    std::string sector;  // canonical group or "Other"
    int year = 0;
    std::string question_id;
    std::string question_text;
    std::string answer_text;

    bool operator==(const DisclosureRecord&) const = default;
};

/// The five canonical sector groups, plus "Other" for everything else.
const std::vector<std::string>& canonical_sectors();
bool is_canonical_sector(const std::string& sector);

struct CorpusProvenance {
    std::string source_path;
    std::string loaded_at;  // wall-clock, in-memory only; never written to reports
    std::size_t rows_total = 0;
    std::size_t rows_accepted = 0;
    std::size_t rows_rejected = 0;
    std::size_t rows_filtered = 0;  // dropped by the question allowlist
};

/// Immutable after load; all downstream reads are pure.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<DisclosureRecord> records, CorpusProvenance provenance);

    const std::vector<DisclosureRecord>& records() const { return records_; }
    const std::vector<int>& years() const { return years_; }
    const CorpusProvenance& provenance() const { return provenance_; }
    bool empty() const { return records_.empty(); }

    std::set<std::string> company_ids() const;

    /// Canonical textual form of the record set (no timestamps); loading the
    /// same file twice yields identical dumps.
    std::string canonical_dump() const;

private:
    std::vector<DisclosureRecord> records_;
    std::vector<int> years_;
    CorpusProvenance provenance_;
};

struct RejectedRow {
    std::size_t row_number;  // 1-based, counting the header as row 1
    std::string reason;
};

/// Column mapping plus validation/filter settings for load_corpus.
struct CorpusSchema {
    /// canonical field name -> CSV header name; defaults to identity.
    std::map<std::string, std::string> columns;
    int year_min = 2010;
    int year_max = 2020;
    /// raw sector label -> canonical group; unmapped non-canonical labels
    /// fall back to "Other".
    std::map<std::string, std::string> sector_map;
    /// optional per-year question id allowlist; empty means keep everything.
    std::map<int, std::set<std::string>> question_allowlist;
};

struct LoadResult {
    Corpus corpus;
    std::vector<RejectedRow> rejects;
};

/// Loads and validates a disclosure CSV. Rejected rows never abort the load;
/// they are reported in `rejects`. Throws ConfigError for a missing file,
/// missing mapped columns, or zero valid rows.
LoadResult load_corpus(const std::filesystem::path& path, const CorpusSchema& schema);

/// Sector map file format: one "raw_label -> canonical_sector" pair per line;
/// blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> load_sector_map(const std::filesystem::path& path);

/// One year of the corpus with records grouped per company.
struct YearSlice {
    int year = 0;
    std::map<std::string, std::vector<DisclosureRecord>> by_company;
    std::size_t record_count = 0;
};

std::map<int, YearSlice> partition_by_year(const Corpus& corpus);

/// Companies present (>= 1 record) in every year of corpus.years().
std::set<std::string> consistent_participants(const Corpus& corpus);

enum class GroupBy { country, sector };

/// counts[(group, year)] = number of distinct companies with >= 1 record in
/// that group-year. Groups without records have no key. A company reporting
/// under two sectors is counted once per sector.
struct ParticipationStats {
    std::map<std::pair<std::string, int>, int> counts;
};

ParticipationStats participation_counts(const Corpus& corpus, GroupBy group_by);

/// entries[(country, year)] = k most frequent answer tokens, descending by
/// count with lexicographic tie-break.
struct WordFrequencyTable {
    std::map<std::pair<std::string, int>, std::vector<std::pair<std::string, std::int64_t>>> entries;
};

WordFrequencyTable top_k_words(const Corpus& corpus, std::size_t k,
                               const std::set<std::string>& stopwords = {});

}  // namespace greenscore
