#pragma once

#include <stdexcept>
#include <string>

namespace greenscore::llm {

enum class ResponseContract { free_text, structured };

/// One chat-completion exchange to be issued through the gateway.
struct CompletionRequest {
    std::string model_id;
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;  // pinned to 0 by default for reproducible runs
    int max_output_tokens = 2048;
    ResponseContract contract = ResponseContract::free_text;
    std::string schema_name;  // set when contract == structured
};

struct CompletionResult {
    std::string text;
    std::string model_id;
    std::string prompt_hash;  // content hash of the request tuple
    bool cached = false;
    long latency_ms = 0;
    int attempt = 1;  // network attempt that produced the text
};

/// Provider failure; `retryable` drives the gateway's backoff loop.
struct BackendError : std::runtime_error {
    BackendError(const std::string& msg, bool retryable_, int status_ = 0)
        : std::runtime_error(msg), retryable(retryable_), status(status_) {}
    bool retryable;
    int status;
};

/// A chat-completion provider. Implementations must be safe to call from
/// multiple threads.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Stable content hash of the request tuple
/// (model_id, system_text, user_text, temperature, response_contract).
std::string request_hash(const CompletionRequest& request);

}  // namespace greenscore::llm
