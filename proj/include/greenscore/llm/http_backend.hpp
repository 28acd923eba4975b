#pragma once

#include <string>

#include "greenscore/llm/backend.hpp"

namespace greenscore::llm {

struct HttpBackendOptions {
    /// Scheme + authority + optional path prefix, e.g.
    /// "https://api.openai.com/v1" or "http://127.0.0.1:8089/v1".
    std::string base_url;
    /// Environment variable holding the bearer token.
    std::string credential_env = "DISCLOSURE_LLM_API_KEY";
    int timeout_seconds = 120;
};

/// OpenAI-compatible chat-completion client:
/// POST <base_url>/chat/completions with {model, messages, temperature,
/// max_tokens}; the reply text is choices[0].message.content.
class HttpBackend : public Backend {
public:
    /// Throws ConfigError when the credential variable is unset, before any
    /// network activity.
    explicit HttpBackend(HttpBackendOptions opts);

    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "http:" + opts_.base_url; }

private:
    HttpBackendOptions opts_;
    std::string credential_;
    std::string host_;         // scheme://authority
    std::string path_prefix_;  // e.g. "/v1"
};

}  // namespace greenscore::llm
