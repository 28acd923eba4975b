#include "greenscore/scorer.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <set>

#include "greenscore/csv.hpp"
#include "greenscore/llm/prompt_markers.hpp"
#include "greenscore/stats.hpp"
#include "greenscore/util.hpp"

namespace greenscore {

namespace {

constexpr const char* kScoringSystemText =
    "You are an analyst scoring corporate climate disclosure responses against a rubric.";

using CompanyChunk = std::vector<std::pair<std::string, std::vector<DisclosureRecord>>>;

llm::SchemaValidator score_chunk_validator(const std::vector<std::string>& company_ids,
                                           std::size_t n_items) {
    return [company_ids, n_items](const nlohmann::json& doc) -> std::optional<std::string> {
        if (!doc.is_object() || !doc.contains("scores") || !doc["scores"].is_array())
            return "document must be an object with a scores array";
        std::set<std::string> expected(company_ids.begin(), company_ids.end());
        std::set<std::string> seen;
        for (const auto& entry : doc["scores"]) {
            if (!entry.is_object() || !entry.contains("company_id") ||
                !entry["company_id"].is_string())
                return "each scores entry needs a company_id string";
            std::string id = entry["company_id"].get<std::string>();
            if (!expected.count(id)) return "unexpected company_id: " + id;
            if (!seen.insert(id).second) return "duplicate company_id: " + id;
            if (!entry.contains("items") || !entry["items"].is_array())
                return "entry for " + id + " needs an items array";
            if (entry["items"].size() != n_items)
                return "entry for " + id + " must have " + std::to_string(n_items) +
                       " item scores";
            for (const auto& s : entry["items"])
                if (!s.is_number_integer()) return "item scores must be integers";
        }
        if (seen.size() != expected.size())
            return "missing companies: got " + std::to_string(seen.size()) + " of " +
                   std::to_string(expected.size());
        return std::nullopt;
    };
}

std::vector<ScoreRecord> score_one_chunk(const CompanyChunk& chunk, const Rubric& rubric,
                                         int year, llm::Gateway& gateway,
                                         const ScorerOptions& options) {
    std::vector<std::string> ids;
    for (const auto& [id, records] : chunk) ids.push_back(id);

    llm::CompletionRequest request;
    request.model_id = options.model_id;
    request.system_text = kScoringSystemText;
    request.user_text = scoring_prompt(rubric, chunk);
    request.max_output_tokens = options.max_output_tokens;
    request.contract = llm::ResponseContract::structured;
    request.schema_name = llm::kSchemaScoreChunk;

    auto result =
        gateway.complete_structured(request, score_chunk_validator(ids, rubric.items.size()));

    std::map<std::string, std::vector<int>> parsed;
    for (const auto& entry : result.document["scores"]) {
        std::vector<int> items;
        for (const auto& s : entry["items"]) items.push_back(s.get<int>());
        parsed[entry["company_id"].get<std::string>()] = std::move(items);
    }

    std::vector<ScoreRecord> out;
    for (const auto& id : ids) {
        ScoreRecord record;
        record.company_id = id;
        record.year = year;
        record.rubric_id = rubric.rubric_id;
        record.prompt_hash = result.prompt_hash;
        record.attempt = result.attempt;
        auto& items = parsed.at(id);
        for (std::size_t i = 0; i < items.size(); ++i) {
            int max_points = rubric.items[i].max_points;
            int score = items[i];
            if (score < 0 || score > max_points) {
                score = std::clamp(score, 0, max_points);
                record.clamped = true;
            }
            record.item_scores.push_back(score);
            record.total += score;
        }
        out.push_back(std::move(record));
    }
    return out;
}

// Binary backoff: an unrepairable chunk is halved and retried down to
// single-company prompts.
std::vector<ScoreRecord> score_chunk_recursive(const CompanyChunk& chunk,
                                               const Rubric& rubric, int year,
                                               llm::Gateway& gateway,
                                               const ScorerOptions& options) {
    try {
        return score_one_chunk(chunk, rubric, year, gateway, options);
    } catch (const StructuredOutputError&) {
        if (chunk.size() <= 1) throw;
        std::size_t half = chunk.size() / 2;
        CompanyChunk left(chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(half));
        CompanyChunk right(chunk.begin() + static_cast<std::ptrdiff_t>(half), chunk.end());
        auto out = score_chunk_recursive(left, rubric, year, gateway, options);
        auto more = score_chunk_recursive(right, rubric, year, gateway, options);
        out.insert(out.end(), more.begin(), more.end());
        return out;
    }
}

std::string block_body(const std::vector<DisclosureRecord>& records, bool mask) {
    std::string body;
    for (const auto& record : records) {
        std::string question = record.question_text;
        std::string answer = record.answer_text;
        if (mask) {
            question = mask_years(question);
            answer = mask_years(answer);
        }
        body += "Question (" + record.question_id + "): " + question + "\n";
        body += llm::kAnswerMarker;
        body += answer;
        body += "\n";
    }
    return body;
}

}  // namespace

std::string scoring_prompt(const Rubric& rubric, const CompanyChunk& chunk) {
    std::string prompt = "Scoring rubric:\n" + rubric_prompt_block(rubric) + "\n\n";
    prompt += "Score each company on every rubric item, in item order, using integer "
              "scores from 0 up to the item's max_points.\n";
    for (const auto& [company_id, records] : chunk) {
        prompt += "\n";
        prompt += llm::kCompanyMarker;
        prompt += company_id;
        prompt += "\n";
        prompt += block_body(records, /*mask=*/false);
    }
    prompt += "\n### End\n\n";
    prompt += "Based on the rubric to evaluate the answers and output a csv for the companies.";
    return prompt;
}

std::vector<ScoreRecord> score_slice(const YearSlice& slice, const Rubric& rubric,
                                     llm::Gateway& gateway, const ScorerOptions& options) {
    if (slice.by_company.empty())
        throw std::invalid_argument("score_slice: empty year slice");
    if (auto violations = validate_rubric(rubric); !violations.empty())
        throw std::invalid_argument("score_slice: rubric is invalid: " +
                                    violations.front().detail);

    std::vector<CompanyChunk> chunks;
    CompanyChunk current;
    for (const auto& [company_id, records] : slice.by_company) {
        current.emplace_back(company_id, records);
        if (current.size() == std::max<std::size_t>(1, options.chunk_size)) {
            chunks.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) chunks.push_back(std::move(current));

    std::vector<std::vector<ScoreRecord>> chunk_results(chunks.size());
    parallel_for(chunks.size(), gateway.max_parallel(), [&](std::size_t i) {
        chunk_results[i] =
            score_chunk_recursive(chunks[i], rubric, slice.year, gateway, options);
    });

    std::vector<ScoreRecord> out;
    for (auto& part : chunk_results)
        for (auto& record : part) out.push_back(std::move(record));
    std::sort(out.begin(), out.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
        return a.company_id < b.company_id;
    });
    return out;
}

ScoreMatrix score_all_with_master(const Corpus& corpus, const Rubric& master,
                                  llm::Gateway& gateway, const ScorerOptions& options) {
    ScoreMatrix matrix;
    matrix.family = "master";
    for (const auto& [year, slice] : partition_by_year(corpus)) {
        for (auto& record : score_slice(slice, master, gateway, options))
            matrix.records[{record.company_id, record.year}] = std::move(record);
    }
    // coverage: no company-year silently dropped
    for (const auto& record : corpus.records()) {
        if (!matrix.records.count({record.company_id, record.year}))
            throw GatewayError("score coverage hole at (" + record.company_id + ", " +
                               std::to_string(record.year) + ")");
    }
    return matrix;
}

ScoreMatrix score_all_yearly(const Corpus& corpus, const RubricSet& rubrics,
                             llm::Gateway& gateway, const ScorerOptions& options) {
    ScoreMatrix matrix;
    matrix.family = "yearly";
    for (const auto& [year, slice] : partition_by_year(corpus)) {
        auto it = rubrics.yearly.find(year);
        if (it == rubrics.yearly.end())
            throw ConfigError("no yearly rubric for year " + std::to_string(year));
        for (auto& record : score_slice(slice, it->second, gateway, options))
            matrix.records[{record.company_id, record.year}] = std::move(record);
    }
    return matrix;
}

const char* naive_variant_name(NaiveVariant variant) {
    switch (variant) {
        case NaiveVariant::plain: return "plain";
        case NaiveVariant::year_hidden: return "year_hidden";
        case NaiveVariant::shuffled: return "shuffled";
    }
    return "unknown";
}

NaiveRun naive_longitudinal_score(const std::string& company_id, const Corpus& corpus,
                                  llm::Gateway& gateway, NaiveVariant variant,
                                  std::uint64_t shuffle_seed, const ScorerOptions& options) {
    std::map<int, std::vector<DisclosureRecord>> by_year;
    for (const auto& record : corpus.records())
        if (record.company_id == company_id) by_year[record.year].push_back(record);
    if (by_year.size() < 2)
        throw std::invalid_argument("naive baseline needs a company present in >= 2 years; " +
                                    company_id + " has " + std::to_string(by_year.size()));

    std::vector<int> year_order;
    for (const auto& [year, records] : by_year) year_order.push_back(year);
    if (variant == NaiveVariant::shuffled) {
        std::mt19937_64 rng(shuffle_seed);
        std::shuffle(year_order.begin(), year_order.end(), rng);
    }
    const bool mask = variant != NaiveVariant::plain;

    std::string prompt = "Complete multi-year disclosure history for one company, "
                         "split into record blocks:\n";
    std::vector<std::string> block_labels;
    for (std::size_t i = 0; i < year_order.size(); ++i) {
        std::string label = "R" + std::to_string(i + 1);
        block_labels.push_back(label);
        prompt += "\n";
        prompt += llm::kBlockMarker;
        prompt += label;
        prompt += "\n";
        if (!mask) prompt += "Year: " + std::to_string(year_order[i]) + "\n";
        prompt += block_body(by_year.at(year_order[i]), mask);
    }
    prompt += "\n### End\n\n";
    prompt += "Assign one integer score from 0 to 100 to each record block for the "
              "quality and depth of its climate strategy disclosure.";

    llm::CompletionRequest request;
    request.model_id = options.model_id;
    request.system_text = kScoringSystemText;
    request.user_text = prompt;
    request.max_output_tokens = options.max_output_tokens;
    request.contract = llm::ResponseContract::structured;
    request.schema_name = llm::kSchemaNaiveSeries;

    auto validator = [&block_labels](const nlohmann::json& doc) -> std::optional<std::string> {
        if (!doc.is_object() || !doc.contains("scores") || !doc["scores"].is_array())
            return "document must be an object with a scores array";
        std::set<std::string> expected(block_labels.begin(), block_labels.end());
        std::set<std::string> seen;
        for (const auto& entry : doc["scores"]) {
            if (!entry.is_object() || !entry.contains("block") || !entry["block"].is_string() ||
                !entry.contains("score") || !entry["score"].is_number())
                return "each entry needs a block label and numeric score";
            std::string label = entry["block"].get<std::string>();
            if (!expected.count(label)) return "unexpected block label: " + label;
            if (!seen.insert(label).second) return "duplicate block label: " + label;
        }
        if (seen.size() != expected.size()) return "missing block scores";
        return std::nullopt;
    };

    auto result = gateway.complete_structured(request, validator);

    NaiveRun run;
    run.method_id = options.model_id + ":" + naive_variant_name(variant);
    std::map<std::string, double> by_label;
    for (const auto& entry : result.document["scores"])
        by_label[entry["block"].get<std::string>()] = entry["score"].get<double>();
    for (std::size_t i = 0; i < year_order.size(); ++i)
        run.series[year_order[i]] = by_label.at(block_labels[i]);
    return run;
}

LabeledMatrix method_correlation_matrix(const std::vector<NaiveRun>& runs) {
    if (runs.size() < 2)
        throw std::invalid_argument("method correlation needs >= 2 runs");
    std::set<int> common;
    for (const auto& [year, value] : runs[0].series) common.insert(year);
    for (std::size_t i = 1; i < runs.size(); ++i) {
        std::set<int> next;
        for (const auto& [year, value] : runs[i].series)
            if (common.count(year)) next.insert(year);
        common = std::move(next);
    }
    if (common.size() < 3)
        throw std::invalid_argument("method correlation needs >= 3 common years, have " +
                                    std::to_string(common.size()));

    std::vector<std::vector<double>> values(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (int year : common) values[i].push_back(runs[i].series.at(year));

    LabeledMatrix matrix;
    for (const auto& run : runs) matrix.labels.push_back(run.method_id);
    matrix.cells.assign(runs.size(), std::vector<std::optional<double>>(runs.size()));
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i; j < runs.size(); ++j) {
            std::optional<double> c;
            if (i == j) {
                auto self = aligned_correlation(values[i], values[i]);
                c = self ? std::optional<double>(1.0) : std::nullopt;
            } else {
                c = aligned_correlation(values[i], values[j]);
            }
            matrix.cells[i][j] = c;
            matrix.cells[j][i] = c;
        }
    }
    return matrix;
}

void write_score_csv(const std::filesystem::path& path,
                     const std::vector<ScoreRecord>& records, std::size_t n_items) {
    std::vector<std::string> header = {"company_id", "year"};
    for (std::size_t i = 1; i <= n_items; ++i) header.push_back("item_" + std::to_string(i));
    header.push_back("total");
    header.push_back("flagged");
    std::string content = csv_join(header);

    std::vector<const ScoreRecord*> sorted;
    for (const auto& record : records) sorted.push_back(&record);
    std::sort(sorted.begin(), sorted.end(), [](const ScoreRecord* a, const ScoreRecord* b) {
        if (a->company_id != b->company_id) return a->company_id < b->company_id;
        return a->year < b->year;
    });
    for (const ScoreRecord* record : sorted) {
        std::vector<std::string> row = {record->company_id, std::to_string(record->year)};
        for (int s : record->item_scores) row.push_back(std::to_string(s));
        row.push_back(std::to_string(record->total));
        row.push_back(record->clamped ? "1" : "0");
        content += csv_join(row);
    }
    atomic_write_file(path, content);
}

std::vector<ScoreRecord> read_score_csv(const std::filesystem::path& path,
                                        const std::string& rubric_id) {
    CsvReader reader(path);
    std::vector<std::string> header;
    if (!reader.next(header)) throw ConfigError("empty score file: " + path.string());
    std::size_t n_items = 0;
    for (const auto& column : header)
        if (starts_with(column, "item_")) ++n_items;

    std::vector<ScoreRecord> out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() != header.size()) continue;
        ScoreRecord record;
        record.company_id = row[0];
        record.year = std::stoi(row[1]);
        record.rubric_id = rubric_id;
        for (std::size_t i = 0; i < n_items; ++i)
            record.item_scores.push_back(std::stoi(row[2 + i]));
        record.total = std::stoi(row[2 + n_items]);
        record.clamped = row[3 + n_items] == "1";
        out.push_back(std::move(record));
    }
    return out;
}

}  // namespace greenscore
