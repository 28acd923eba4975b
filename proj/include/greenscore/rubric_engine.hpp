#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "greenscore/corpus.hpp"
#include "greenscore/llm/gateway.hpp"
#include "greenscore/rubric.hpp"

namespace greenscore {

struct RubricEngineOptions {
    std::string model_id = "mock-judge";
    int max_output_tokens = 4096;
    /// Context budget for rubric induction: when a year slice is larger,
    /// a sector-stratified subset of companies is used for the prompt.
    std::size_t max_companies = 40;
    std::size_t max_answer_chars = 1200;
    /// Mask explicit calendar years inside question/answer bodies.
    bool hide_years = false;
};

struct RubricProvenance {
    std::string rubric_id;
    std::string prompt_hash;
    std::string model_id;
    std::string backend;
    int structured_attempt = 1;
    std::size_t companies_total = 0;
    std::size_t companies_used = 0;
    bool sampled = false;
    bool years_masked = false;
};

struct RubricGeneration {
    Rubric rubric;
    RubricProvenance provenance;
};

/// Induces a rubric for one year slice. The generated document is validated
/// structurally before being returned; schema-invalid replies go through the
/// gateway's repair loop.
RubricGeneration generate_yearly_rubric(const YearSlice& slice, llm::Gateway& gateway,
                                        const RubricEngineOptions& options);

/// Builds one master rubric from all yearly rubrics. The prompt holds only
/// the serialized rubrics, never raw answers, so its size is bounded by the
/// rubric count. Requires at least two yearly rubrics.
RubricGeneration aggregate_master_rubric(const RubricSet& set, llm::Gateway& gateway,
                                         const RubricEngineOptions& options);

/// Validator used for the gateway's structured repair loop: parse + all
/// structural invariants.
llm::SchemaValidator rubric_schema_validator();

void save_rubric_with_provenance(const RubricGeneration& generation,
                                 const std::filesystem::path& dir);

// Exposed for the offline backend's prompt introspection and for tests.
std::string yearly_rubric_prompt(const YearSlice& slice, const RubricEngineOptions& options,
                                 RubricProvenance& provenance);
std::string master_rubric_prompt(const RubricSet& set);

}  // namespace greenscore
