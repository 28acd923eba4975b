#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "greenscore/corpus.hpp"

namespace greenscore {

struct BackendConfig {
    std::string kind = "mock";  // "mock" | "live"
    std::uint64_t seed = 0;
    bool echo_scores = false;
    std::string model_id = "mock-judge";
    std::string base_url = "https://api.openai.com/v1";
    std::string credential_env = "DISCLOSURE_LLM_API_KEY";
    double temperature = 0.0;
    int max_output_tokens = 4096;
    int max_attempts = 4;
    int backoff_initial_ms = 250;
    int structured_max_attempts = 3;
    std::size_t parallelism = 4;
    int min_request_interval_ms = 0;
};

/// One versioned config file drives a whole run; CLI flags are overrides of
/// config keys. The effective config is hashed into the run manifest.
struct PipelineConfig {
    std::filesystem::path corpus_path;
    CorpusSchema schema;
    std::optional<std::filesystem::path> stopwords_path;
    BackendConfig backend;
    std::size_t companies_per_prompt = 10;
    std::size_t rubric_max_companies = 40;
    std::size_t rubric_max_answer_chars = 1200;
    bool hide_years_in_rubric_prompts = false;
    std::filesystem::path output_dir;
    bool emit_svg = false;
    std::size_t words_k = 2;
};

/// Loads and validates a pipeline config. Relative paths resolve against the
/// config file's directory. Throws ConfigError on any problem.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// "mock:SEED" or "live" (CLI --backend form).
void apply_backend_override(PipelineConfig& config, const std::string& backend_spec);

/// "A..B" (CLI --years form).
void apply_years_override(PipelineConfig& config, const std::string& years_spec);

/// Canonical serialization of the effective config.
nlohmann::json config_to_json(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

}  // namespace greenscore
