#include "greenscore/rubric_engine.hpp"

#include <algorithm>

#include "greenscore/llm/prompt_markers.hpp"
#include "greenscore/util.hpp"

namespace greenscore {

namespace {

constexpr const char* kSystemText =
    "You are an analyst evaluating corporate climate disclosure responses.";

// The instruction the yearly prompt carries; scoring itself is issued
// separately so the reply document only needs to contain the rubric.
constexpr const char* kYearlyInstruction =
    "First, generate a rubric to evaluate climate responses. Then, based on the "
    "rubric to evaluate the answers and output a csv for the companies.";

std::string clip(const std::string& text, std::size_t limit) {
    if (text.size() <= limit) return text;
    return text.substr(0, limit) + "...";
}

/// Sector-stratified subset: round-robin across sorted sectors, companies
/// sorted by id within each sector.
std::vector<std::string> select_companies(const YearSlice& slice, std::size_t max_companies) {
    std::map<std::string, std::vector<std::string>> by_sector;
    for (const auto& [company_id, records] : slice.by_company) {
        std::string sector = records.empty() ? std::string("Other") : records.front().sector;
        by_sector[sector].push_back(company_id);
    }
    std::vector<std::string> selected;
    std::size_t round = 0;
    while (selected.size() < max_companies) {
        bool any = false;
        for (auto& [sector, ids] : by_sector) {
            if (round < ids.size() && selected.size() < max_companies) {
                selected.push_back(ids[round]);
                any = true;
            }
        }
        if (!any) break;
        ++round;
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

}  // namespace

std::string yearly_rubric_prompt(const YearSlice& slice, const RubricEngineOptions& options,
                                 RubricProvenance& provenance) {
    provenance.companies_total = slice.by_company.size();
    std::vector<std::string> companies;
    if (slice.by_company.size() > options.max_companies) {
        companies = select_companies(slice, options.max_companies);
        provenance.sampled = true;
    } else {
        for (const auto& [company_id, records] : slice.by_company)
            companies.push_back(company_id);
    }
    provenance.companies_used = companies.size();
    provenance.years_masked = options.hide_years;

    std::string prompt = "Question-answer records from corporate climate disclosures "
                         "for one reporting year:\n";
    for (const auto& company_id : companies) {
        prompt += "\n";
        prompt += llm::kCompanyMarker;
        prompt += company_id;
        prompt += "\n";
        for (const auto& record : slice.by_company.at(company_id)) {
            std::string question = record.question_text;
            std::string answer = clip(record.answer_text, options.max_answer_chars);
            if (options.hide_years) {
                question = mask_years(question);
                answer = mask_years(answer);
            }
            prompt += "Question (" + record.question_id + "): " + question + "\n";
            prompt += llm::kAnswerMarker;
            prompt += answer;
            prompt += "\n";
        }
    }
    prompt += "\n### End\n\n";
    prompt += kYearlyInstruction;
    return prompt;
}

std::string master_rubric_prompt(const RubricSet& set) {
    std::string prompt = llm::kYearlyRubricsMarker;
    prompt += "\nThe rubrics below were each generated from a separate reporting year.\n";
    for (const auto& [year, rubric] : set.yearly) {
        prompt += "\n";
        prompt += rubric_prompt_block(rubric);
        prompt += "\n";
    }
    prompt += "\nBased on the " + std::to_string(set.yearly.size()) +
              " rubrics generated, generate one comprehensive but concise rubric "
              "that works for all rubrics across these years:";
    return prompt;
}

llm::SchemaValidator rubric_schema_validator() {
    return [](const nlohmann::json& doc) -> std::optional<std::string> {
        Rubric rubric;
        try {
            rubric = rubric_from_json(doc, "candidate");
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        auto violations = validate_rubric(rubric);
        if (!violations.empty())
            return violations.front().code + ": " + violations.front().detail;
        return std::nullopt;
    };
}

RubricGeneration generate_yearly_rubric(const YearSlice& slice, llm::Gateway& gateway,
                                        const RubricEngineOptions& options) {
    if (slice.by_company.empty())
        throw ConfigError("cannot induce a rubric from an empty year slice");

    RubricGeneration generation;
    generation.provenance.rubric_id = "yearly:" + std::to_string(slice.year);

    llm::CompletionRequest request;
    request.model_id = options.model_id;
    request.system_text = kSystemText;
    request.user_text = yearly_rubric_prompt(slice, options, generation.provenance);
    request.max_output_tokens = options.max_output_tokens;
    request.contract = llm::ResponseContract::structured;
    request.schema_name = llm::kSchemaRubric;

    auto result = gateway.complete_structured(request, rubric_schema_validator());
    generation.rubric = rubric_from_json(result.document, generation.provenance.rubric_id);
    generation.rubric.source_prompt_hash = result.prompt_hash;
    generation.provenance.prompt_hash = result.prompt_hash;
    generation.provenance.model_id = options.model_id;
    generation.provenance.backend = gateway.backend_name();
    generation.provenance.structured_attempt = result.attempt;
    return generation;
}

RubricGeneration aggregate_master_rubric(const RubricSet& set, llm::Gateway& gateway,
                                         const RubricEngineOptions& options) {
    if (set.yearly.size() < 2)
        throw ConfigError("master rubric aggregation needs at least 2 yearly rubrics, have " +
                          std::to_string(set.yearly.size()));

    RubricGeneration generation;
    generation.provenance.rubric_id = "master";
    generation.provenance.companies_total = 0;
    generation.provenance.companies_used = 0;

    llm::CompletionRequest request;
    request.model_id = options.model_id;
    request.system_text = kSystemText;
    request.user_text = master_rubric_prompt(set);
    request.max_output_tokens = options.max_output_tokens;
    request.contract = llm::ResponseContract::structured;
    request.schema_name = llm::kSchemaRubric;

    auto result = gateway.complete_structured(request, rubric_schema_validator());
    generation.rubric = rubric_from_json(result.document, "master");
    generation.rubric.source_prompt_hash = result.prompt_hash;
    generation.provenance.prompt_hash = result.prompt_hash;
    generation.provenance.model_id = options.model_id;
    generation.provenance.backend = gateway.backend_name();
    generation.provenance.structured_attempt = result.attempt;
    return generation;
}

void save_rubric_with_provenance(const RubricGeneration& generation,
                                 const std::filesystem::path& dir) {
    save_rubric(generation.rubric, dir);
    const RubricProvenance& p = generation.provenance;
    nlohmann::json sidecar = {{"rubric_id", p.rubric_id},
                              {"prompt_hash", p.prompt_hash},
                              {"model_id", p.model_id},
                              {"backend", p.backend},
                              {"structured_attempt", p.structured_attempt},
                              {"companies_total", p.companies_total},
                              {"companies_used", p.companies_used},
                              {"sampled", p.sampled},
                              {"years_masked", p.years_masked}};
    atomic_write_file(dir / (rubric_file_stem(p.rubric_id) + ".provenance.json"),
                      sidecar.dump(2) + "\n");
}

}  // namespace greenscore
