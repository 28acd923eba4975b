#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "greenscore/llm/backend.hpp"
#include "greenscore/llm/cache.hpp"

namespace greenscore::llm {

struct GatewayOptions {
    std::filesystem::path cache_dir;
    std::filesystem::path audit_dir;
    int max_attempts = 4;           // network attempts per request
    int backoff_initial_ms = 250;   // exponential backoff base
    double backoff_multiplier = 2.0;
    int structured_max_attempts = 3;  // parse/validate repair loop
    std::size_t max_parallel = 4;     // request fan-out bound for callers
    int min_request_interval_ms = 0;  // provider rate limit; 0 = unlimited
};

/// Returns an error message when the document does not satisfy the schema.
using SchemaValidator = std::function<std::optional<std::string>(const nlohmann::json&)>;

struct StructuredResult {
    nlohmann::json document;
    std::string raw_text;
    int attempt = 1;  // validation attempt that produced the document
    std::string prompt_hash;
};

/// First well-formed JSON document in a reply: fenced ```json blocks are
/// tried first, then any balanced {...} region.
std::optional<nlohmann::json> extract_first_json(const std::string& text);

/// Uniform access to a completion backend with a content-addressed cache,
/// bounded retries, duplicate-request coalescing, and an exchange audit trail.
///
/// Shareable across threads. Callers doing fan-out should bound themselves
/// with max_parallel().
class Gateway {
public:
    Gateway(std::shared_ptr<Backend> backend, GatewayOptions options);

    /// Cache hits return the stored text with cached=true and perform no
    /// backend call. Transient backend failures retry with exponential
    /// backoff up to the configured limit.
    CompletionResult complete(const CompletionRequest& request);

    /// Appends the machine-readable-output instruction, extracts the first
    /// well-formed document, validates it, and re-issues with error feedback
    /// up to structured_max_attempts times. Throws StructuredOutputError
    /// with all raw replies attached after exhaustion.
    StructuredResult complete_structured(const CompletionRequest& request,
                                         const SchemaValidator& validator);

    long live_calls() const { return live_calls_.load(); }
    long cache_hits() const { return cache_hits_.load(); }
    long coalesced_joins() const { return coalesced_.load(); }
    std::size_t max_parallel() const { return options_.max_parallel; }
    const std::string backend_name() const { return backend_->name(); }

private:
    struct CallOutcome {
        std::string text;
        int attempt = 1;
        long latency_ms = 0;
    };

    CallOutcome call_with_retries(const CompletionRequest& request);
    void rate_limit_wait();
    void write_audit_if_missing(const CompletionRequest& request, const std::string& key,
                                const std::string& reply) const;

    std::shared_ptr<Backend> backend_;
    GatewayOptions options_;
    CompletionCache cache_;

    std::mutex inflight_mutex_;
    std::unordered_map<std::string, std::shared_future<CallOutcome>> inflight_;

    std::mutex rate_mutex_;
    std::chrono::steady_clock::time_point last_dispatch_{};

    std::atomic<long> live_calls_{0};
    std::atomic<long> cache_hits_{0};
    std::atomic<long> coalesced_{0};
};

}  // namespace greenscore::llm
