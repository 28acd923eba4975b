#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greenscore/corpus.hpp"
#include "greenscore/llm/gateway.hpp"
#include "greenscore/rubric.hpp"

namespace greenscore {

/// Per-company-per-year scores under one rubric.
struct ScoreRecord {
    std::string company_id;
    int year = 0;
    std::string rubric_id;
    std::vector<int> item_scores;  // 0 <= item_scores[i] <= rubric.items[i].max_points
    int total = 0;                 // sum of item_scores
    bool clamped = false;          // some model output was out of range
    std::string prompt_hash;
    int attempt = 1;
};

struct ScoreMatrix {
    std::string family;  // "yearly" or "master"
    std::map<std::pair<std::string, int>, ScoreRecord> records;

    std::size_t size() const { return records.size(); }
};

struct ScorerOptions {
    std::string model_id = "mock-judge";
    int max_output_tokens = 4096;
    std::size_t chunk_size = 10;  // companies per scoring prompt
};

/// Scores every company of a year slice under `rubric`. Companies are
/// batched into chunks; a chunk whose reply cannot be repaired is halved and
/// retried down to single-company prompts before failing. Out-of-range item
/// scores are clamped and flagged, never silently dropped.
std::vector<ScoreRecord> score_slice(const YearSlice& slice, const Rubric& rubric,
                                     llm::Gateway& gateway, const ScorerOptions& options);

/// score_slice over every year with the master rubric; covers every
/// (company, year) pair present in the corpus.
ScoreMatrix score_all_with_master(const Corpus& corpus, const Rubric& master,
                                  llm::Gateway& gateway, const ScorerOptions& options);

/// score_slice over every year with that year's own rubric.
ScoreMatrix score_all_yearly(const Corpus& corpus, const RubricSet& rubrics,
                             llm::Gateway& gateway, const ScorerOptions& options);

enum class NaiveVariant { plain, year_hidden, shuffled };
const char* naive_variant_name(NaiveVariant variant);

/// Whole-history baseline: one prompt holding a company's full multi-year
/// Q/A record, scored per year in a single reply.
struct NaiveRun {
    std::string method_id;       // "<model>:<variant>"
    std::map<int, double> series;  // year -> score
};

/// Requires the company to be present in at least 2 years. year_hidden masks
/// calendar years; shuffled additionally permutes the year blocks with the
/// given seed (years stay recoverable through the block labels we assign).
NaiveRun naive_longitudinal_score(const std::string& company_id, const Corpus& corpus,
                                  llm::Gateway& gateway, NaiveVariant variant,
                                  std::uint64_t shuffle_seed, const ScorerOptions& options);

/// Labeled symmetric matrix with optional cells; empty cells mark undefined
/// correlations (zero variance).
struct LabeledMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<double>>> cells;
};

/// Pairwise score-series correlation between naive runs, restricted to the
/// years all runs share. Requires >= 2 runs and >= 3 common years.
LabeledMatrix method_correlation_matrix(const std::vector<NaiveRun>& runs);

void write_score_csv(const std::filesystem::path& path,
                     const std::vector<ScoreRecord>& records, std::size_t n_items);
std::vector<ScoreRecord> read_score_csv(const std::filesystem::path& path,
                                        const std::string& rubric_id);

// Prompt builder, exposed for tests.
std::string scoring_prompt(const Rubric& rubric,
                           const std::vector<std::pair<std::string, std::vector<DisclosureRecord>>>& chunk);

}  // namespace greenscore
