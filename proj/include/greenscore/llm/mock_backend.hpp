#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

#include "greenscore/llm/backend.hpp"

namespace greenscore::llm {

struct MockOptions {
    std::uint64_t seed = 0;
    /// When nonempty, replies replay this sequence (last entry repeats).
    std::vector<std::string> script;
    /// Echo mode: item scores ignore the rubric's own point scale and cap at
    /// the yearly maximum, so master-rubric scores equal yearly scores.
    bool echo_scores = false;
    /// Artificial per-call delay, for concurrency tests.
    int delay_ms = 0;
};

/// Deterministic offline backend. Unscripted replies are synthesized from a
/// seeded hash of the prompt plus a keyword-count heuristic over the answer
/// texts embedded in it, so richer answers score monotonically higher.
class MockBackend : public Backend {
public:
    explicit MockBackend(MockOptions opts = {});

    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "mock"; }

    int calls() const { return calls_.load(); }
    std::vector<std::string> seen_user_texts() const;

private:
    std::string synthesize(const CompletionRequest& request) const;

    MockOptions opts_;
    mutable std::mutex mutex_;
    std::size_t script_index_ = 0;
    std::atomic<int> calls_{0};
    std::vector<std::string> seen_;
};

}  // namespace greenscore::llm
