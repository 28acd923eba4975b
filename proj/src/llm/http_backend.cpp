#include "greenscore/llm/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "greenscore/util.hpp"

namespace greenscore::llm {

HttpBackend::HttpBackend(HttpBackendOptions opts) : opts_(std::move(opts)) {
    const char* key = std::getenv(opts_.credential_env.c_str());
    if (key == nullptr || *key == '\0')
        throw ConfigError("credential missing: environment variable " +
                          opts_.credential_env + " is not set");
    credential_ = key;

    // split base_url into scheme://authority and path prefix
    auto scheme_end = opts_.base_url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("base_url must include a scheme: " + opts_.base_url);
    auto path_start = opts_.base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = opts_.base_url;
    } else {
        host_ = opts_.base_url.substr(0, path_start);
        path_prefix_ = opts_.base_url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/')
            path_prefix_.pop_back();
    }
}

std::string HttpBackend::complete(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_text.empty())
        messages.push_back({{"role", "system"}, {"content", request.system_text}});
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    nlohmann::json body = {{"model", request.model_id},
                           {"messages", messages},
                           {"temperature", request.temperature},
                           {"max_tokens", request.max_output_tokens}};

    httplib::Client client(host_);
    client.set_connection_timeout(opts_.timeout_seconds);
    client.set_read_timeout(opts_.timeout_seconds);
    client.set_bearer_token_auth(credential_);

    auto result = client.Post(path_prefix_ + "/chat/completions", body.dump(),
                              "application/json");
    if (!result)
        throw BackendError("transport failure: " + httplib::to_string(result.error()),
                           /*retryable=*/true);
    if (result->status == 429 || result->status >= 500)
        throw BackendError("provider status " + std::to_string(result->status),
                           /*retryable=*/true, result->status);
    if (result->status != 200) {
        std::string snippet = result->body.substr(0, 200);
        throw BackendError("provider rejected request with status " +
                               std::to_string(result->status) + ": " + snippet,
                           /*retryable=*/false, result->status);
    }
    auto doc = nlohmann::json::parse(result->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
        !doc["choices"][0].contains("message") ||
        !doc["choices"][0]["message"].contains("content"))
        throw BackendError("malformed provider reply", /*retryable=*/false,
                           result->status);
    return doc["choices"][0]["message"]["content"].get<std::string>();
}

}  // namespace greenscore::llm
