#pragma once

#include <memory>
#include <optional>
#include <string>

#include "greenscore/config.hpp"
#include "greenscore/corpus.hpp"
#include "greenscore/llm/gateway.hpp"
#include "greenscore/llm/mock_backend.hpp"

namespace greenscore {

/// Exit code conventions shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;   // flagged scores or skipped groups present
inline constexpr int kExitConfig = 2;    // configuration/input error

enum class ScoreWhich { yearly, master, both };

/// Orchestrates the pipeline stages over one output directory. Stages talk
/// through files, so any stage can be rerun or resumed; the completion cache
/// makes reruns free of live backend calls.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    /// load + participation counts + word frequency tables
    /// (corpus_summary.csv, wordfreq.csv, rejects.csv).
    int run_ingest();

    /// yearly rubrics for every corpus year, then the master rubric.
    int run_rubrics();

    /// score matrices under yearly and/or master rubrics; optionally the
    /// whole-history naive baselines for one company.
    int run_score(ScoreWhich which, const std::optional<std::string>& naive_company);

    /// the full analytics bundle (+ optional SVG charts).
    int run_analyze();

    /// all stages in order.
    int run_all(const std::optional<std::string>& naive_company = std::nullopt);

    llm::Gateway& gateway();
    /// Non-null when the backend is the offline mock.
    llm::MockBackend* mock_backend();
    const PipelineConfig& config() const { return config_; }

private:
    const LoadResult& corpus();
    void write_manifest(const std::string& command);
    void note_partial(const std::string& reason);

    PipelineConfig config_;
    std::optional<LoadResult> loaded_;
    std::shared_ptr<llm::Backend> backend_;
    std::unique_ptr<llm::Gateway> gateway_;
    llm::MockBackend* mock_ = nullptr;
    bool partial_ = false;
    std::vector<std::string> partial_reasons_;
    std::map<std::string, long> timings_ms_;
    std::map<std::string, long> counts_;
};

}  // namespace greenscore
