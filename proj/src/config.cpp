#include "greenscore/config.hpp"

#include <fstream>

#include "greenscore/hash.hpp"
#include "greenscore/util.hpp"

namespace greenscore {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_absolute()) return p;
    return base / p;
}

template <typename T>
T get_or(const nlohmann::json& node, const char* key, T fallback) {
    if (!node.contains(key)) return fallback;
    return node.at(key).get<T>();
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config file not found: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    const auto base = std::filesystem::absolute(path).parent_path();

    PipelineConfig config;
    if (!doc.contains("corpus") || !doc["corpus"].contains("path"))
        throw ConfigError("config needs corpus.path");
    const auto& corpus = doc["corpus"];
    config.corpus_path = resolve(base, corpus["path"].get<std::string>());

    if (corpus.contains("columns"))
        for (const auto& [field, column] : corpus["columns"].items())
            config.schema.columns[field] = column.get<std::string>();
    if (corpus.contains("year_window")) {
        const auto& window = corpus["year_window"];
        if (!window.is_array() || window.size() != 2)
            throw ConfigError("corpus.year_window must be [min, max]");
        config.schema.year_min = window[0].get<int>();
        config.schema.year_max = window[1].get<int>();
        if (config.schema.year_min > config.schema.year_max)
            throw ConfigError("corpus.year_window min exceeds max");
    }
    if (corpus.contains("sector_map") && !corpus["sector_map"].is_null())
        config.schema.sector_map =
            load_sector_map(resolve(base, corpus["sector_map"].get<std::string>()));
    if (corpus.contains("question_allowlist") && !corpus["question_allowlist"].is_null()) {
        for (const auto& [year_text, ids] : corpus["question_allowlist"].items()) {
            int year = 0;
            try {
                year = std::stoi(year_text);
            } catch (const std::exception&) {
                throw ConfigError("question_allowlist keys must be years, got: " + year_text);
            }
            for (const auto& id : ids)
                config.schema.question_allowlist[year].insert(id.get<std::string>());
        }
    }
    if (corpus.contains("stopwords") && !corpus["stopwords"].is_null())
        config.stopwords_path = resolve(base, corpus["stopwords"].get<std::string>());

    if (doc.contains("backend")) {
        const auto& backend = doc["backend"];
        config.backend.kind = get_or<std::string>(backend, "kind", "mock");
        if (config.backend.kind != "mock" && config.backend.kind != "live")
            throw ConfigError("backend.kind must be \"mock\" or \"live\"");
        config.backend.seed = get_or<std::uint64_t>(backend, "seed", 0);
        config.backend.echo_scores = get_or<bool>(backend, "echo_scores", false);
        config.backend.model_id = get_or<std::string>(
            backend, "model_id", config.backend.kind == "mock" ? "mock-judge" : "gpt-4o");
        config.backend.base_url =
            get_or<std::string>(backend, "base_url", config.backend.base_url);
        config.backend.credential_env =
            get_or<std::string>(backend, "credential_env", config.backend.credential_env);
        config.backend.temperature = get_or<double>(backend, "temperature", 0.0);
        config.backend.max_output_tokens = get_or<int>(backend, "max_output_tokens", 4096);
        config.backend.max_attempts = get_or<int>(backend, "max_attempts", 4);
        config.backend.backoff_initial_ms = get_or<int>(backend, "backoff_initial_ms", 250);
        config.backend.structured_max_attempts =
            get_or<int>(backend, "structured_max_attempts", 3);
        config.backend.parallelism = get_or<std::size_t>(backend, "parallelism", 4);
        config.backend.min_request_interval_ms =
            get_or<int>(backend, "min_request_interval_ms", 0);
    }

    if (doc.contains("chunking")) {
        const auto& chunking = doc["chunking"];
        config.companies_per_prompt =
            get_or<std::size_t>(chunking, "companies_per_prompt", 10);
        config.rubric_max_companies =
            get_or<std::size_t>(chunking, "rubric_max_companies", 40);
        config.rubric_max_answer_chars =
            get_or<std::size_t>(chunking, "rubric_max_answer_chars", 1200);
        config.hide_years_in_rubric_prompts =
            get_or<bool>(chunking, "hide_years_in_rubric_prompts", false);
    }

    if (!doc.contains("output_dir")) throw ConfigError("config needs output_dir");
    config.output_dir = resolve(base, doc["output_dir"].get<std::string>());

    if (doc.contains("reports")) {
        config.emit_svg = get_or<bool>(doc["reports"], "svg", false);
        config.words_k = get_or<std::size_t>(doc["reports"], "words_k", 2);
    }
    if (config.words_k < 1) throw ConfigError("reports.words_k must be >= 1");
    return config;
}

void apply_backend_override(PipelineConfig& config, const std::string& backend_spec) {
    if (backend_spec == "live") {
        config.backend.kind = "live";
        return;
    }
    if (starts_with(backend_spec, "mock")) {
        config.backend.kind = "mock";
        auto colon = backend_spec.find(':');
        if (colon != std::string::npos) {
            try {
                config.backend.seed = std::stoull(backend_spec.substr(colon + 1));
            } catch (const std::exception&) {
                throw ConfigError("bad --backend seed in: " + backend_spec);
            }
        }
        return;
    }
    throw ConfigError("--backend must be mock[:SEED] or live, got: " + backend_spec);
}

void apply_years_override(PipelineConfig& config, const std::string& years_spec) {
    auto sep = years_spec.find("..");
    if (sep == std::string::npos)
        throw ConfigError("--years must look like A..B, got: " + years_spec);
    try {
        config.schema.year_min = std::stoi(years_spec.substr(0, sep));
        config.schema.year_max = std::stoi(years_spec.substr(sep + 2));
    } catch (const std::exception&) {
        throw ConfigError("--years must look like A..B, got: " + years_spec);
    }
    if (config.schema.year_min > config.schema.year_max)
        throw ConfigError("--years min exceeds max");
}

nlohmann::json config_to_json(const PipelineConfig& config) {
    nlohmann::json allowlist = nlohmann::json::object();
    for (const auto& [year, ids] : config.schema.question_allowlist)
        allowlist[std::to_string(year)] = std::vector<std::string>(ids.begin(), ids.end());
    nlohmann::json sector_map = nlohmann::json::object();
    for (const auto& [raw, canonical] : config.schema.sector_map)
        sector_map[raw] = canonical;
    return {
        {"corpus",
         {{"path", config.corpus_path.string()},
          {"columns", config.schema.columns},
          {"year_window", {config.schema.year_min, config.schema.year_max}},
          {"sector_map", sector_map},
          {"question_allowlist", allowlist},
          {"stopwords",
           config.stopwords_path ? config.stopwords_path->string() : std::string()}}},
        {"backend",
         {{"kind", config.backend.kind},
          {"seed", config.backend.seed},
          {"echo_scores", config.backend.echo_scores},
          {"model_id", config.backend.model_id},
          {"base_url", config.backend.base_url},
          {"credential_env", config.backend.credential_env},
          {"temperature", config.backend.temperature},
          {"max_output_tokens", config.backend.max_output_tokens},
          {"max_attempts", config.backend.max_attempts},
          {"backoff_initial_ms", config.backend.backoff_initial_ms},
          {"structured_max_attempts", config.backend.structured_max_attempts},
          {"parallelism", config.backend.parallelism},
          {"min_request_interval_ms", config.backend.min_request_interval_ms}}},
        {"chunking",
         {{"companies_per_prompt", config.companies_per_prompt},
          {"rubric_max_companies", config.rubric_max_companies},
          {"rubric_max_answer_chars", config.rubric_max_answer_chars},
          {"hide_years_in_rubric_prompts", config.hide_years_in_rubric_prompts}}},
        {"output_dir", config.output_dir.string()},
        {"reports", {{"svg", config.emit_svg}, {"words_k", config.words_k}}},
    };
}

std::string config_hash(const PipelineConfig& config) {
    return sha256_hex(config_to_json(config).dump());
}

}  // namespace greenscore
