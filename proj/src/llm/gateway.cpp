#include "greenscore/llm/gateway.hpp"

#include <chrono>
#include <iostream>
#include <thread>

#include "greenscore/hash.hpp"
#include "greenscore/llm/prompt_markers.hpp"
#include "greenscore/util.hpp"

namespace greenscore::llm {

namespace {

std::string contract_tag(const CompletionRequest& request) {
    if (request.contract == ResponseContract::free_text) return "free_text";
    return "structured:" + request.schema_name;
}

std::string len_prefixed(const std::string& s) {
    return std::to_string(s.size()) + ":" + s;
}

}  // namespace

std::string request_hash(const CompletionRequest& request) {
    char temp[32];
    std::snprintf(temp, sizeof(temp), "%.6g", request.temperature);
    std::string canonical = "chat/v1\n";
    canonical += "model=" + len_prefixed(request.model_id) + "\n";
    canonical += "temperature=" + std::string(temp) + "\n";
    canonical += "contract=" + contract_tag(request) + "\n";
    canonical += "system=" + len_prefixed(request.system_text) + "\n";
    canonical += "user=" + len_prefixed(request.user_text) + "\n";
    return sha256_hex(canonical);
}

std::optional<nlohmann::json> extract_first_json(const std::string& text) {
    // fenced blocks first
    std::size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        std::size_t body_start = text.find('\n', pos);
        if (body_start == std::string::npos) break;
        std::size_t fence_end = text.find("```", body_start);
        if (fence_end == std::string::npos) break;
        auto doc = nlohmann::json::parse(
            text.substr(body_start + 1, fence_end - body_start - 1), nullptr, false);
        if (!doc.is_discarded()) return doc;
        pos = fence_end + 3;
    }
    // fallback: first balanced top-level object
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (c == '\\') ++i;
                else if (c == '"') in_string = false;
            } else if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    auto doc = nlohmann::json::parse(text.substr(start, i - start + 1),
                                                     nullptr, false);
                    if (!doc.is_discarded()) return doc;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(std::move(options)),
      cache_(options_.cache_dir) {
    std::filesystem::create_directories(options_.audit_dir);
}

void Gateway::rate_limit_wait() {
    if (options_.min_request_interval_ms <= 0) return;
    std::chrono::steady_clock::duration wait{};
    {
        std::lock_guard<std::mutex> lock(rate_mutex_);
        auto interval = std::chrono::milliseconds(options_.min_request_interval_ms);
        auto now = std::chrono::steady_clock::now();
        auto earliest = last_dispatch_ + interval;
        if (now < earliest) {
            wait = earliest - now;
            last_dispatch_ = earliest;
        } else {
            last_dispatch_ = now;
        }
    }
    if (wait.count() > 0) std::this_thread::sleep_for(wait);
}

Gateway::CallOutcome Gateway::call_with_retries(const CompletionRequest& request) {
    double backoff_ms = options_.backoff_initial_ms;
    for (int attempt = 1;; ++attempt) {
        rate_limit_wait();
        auto t0 = std::chrono::steady_clock::now();
        try {
            std::string text = backend_->complete(request);
            live_calls_.fetch_add(1);
            auto t1 = std::chrono::steady_clock::now();
            long latency = static_cast<long>(
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
            return {std::move(text), attempt, latency};
        } catch (const BackendError& e) {
            live_calls_.fetch_add(1);
            std::clog << "[gateway] attempt " << attempt << " failed: " << e.what()
                      << (e.retryable ? " (retryable)" : " (fatal)") << "\n";
            if (!e.retryable || attempt >= options_.max_attempts)
                throw GatewayError("backend failure after " + std::to_string(attempt) +
                                   " attempt(s): " + e.what());
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long>(backoff_ms)));
            backoff_ms *= options_.backoff_multiplier;
        }
    }
}

void Gateway::write_audit_if_missing(const CompletionRequest& request,
                                     const std::string& key,
                                     const std::string& reply) const {
    auto path = options_.audit_dir / (key + ".json");
    if (std::filesystem::exists(path)) return;
    nlohmann::json record = {{"prompt_hash", key},
                             {"model_id", request.model_id},
                             {"temperature", request.temperature},
                             {"contract", contract_tag(request)},
                             {"system_text", request.system_text},
                             {"user_text", request.user_text},
                             {"reply_text", reply}};
    atomic_write_file(path, record.dump(2) + "\n");
}

CompletionResult Gateway::complete(const CompletionRequest& request) {
    if (request.user_text.empty())
        throw GatewayError("completion request has empty user_text");
    if (request.temperature < 0.0 || request.temperature > 1.0)
        throw GatewayError("temperature must be within [0, 1]");

    const std::string key = request_hash(request);

    if (auto hit = cache_.get(key)) {
        cache_hits_.fetch_add(1);
        write_audit_if_missing(request, key, *hit);
        CompletionResult r;
        r.text = std::move(*hit);
        r.model_id = request.model_id;
        r.prompt_hash = key;
        r.cached = true;
        return r;
    }

    // coalesce duplicate in-flight requests onto one backend call
    std::promise<CallOutcome> promise;
    std::shared_future<CallOutcome> future;
    bool leader = false;
    {
        std::lock_guard<std::mutex> lock(inflight_mutex_);
        auto it = inflight_.find(key);
        if (it != inflight_.end()) {
            future = it->second;
        } else {
            leader = true;
            future = promise.get_future().share();
            inflight_.emplace(key, future);
        }
    }

    if (!leader) {
        coalesced_.fetch_add(1);
        CallOutcome outcome = future.get();  // rethrows the leader's failure
        CompletionResult r;
        r.text = outcome.text;
        r.model_id = request.model_id;
        r.prompt_hash = key;
        r.attempt = outcome.attempt;
        r.latency_ms = outcome.latency_ms;
        return r;
    }

    CallOutcome outcome;
    try {
        outcome = call_with_retries(request);
        cache_.put(key, outcome.text, request.model_id);
        write_audit_if_missing(request, key, outcome.text);
    } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard<std::mutex> lock(inflight_mutex_);
        inflight_.erase(key);
        throw;
    }
    promise.set_value(outcome);
    {
        std::lock_guard<std::mutex> lock(inflight_mutex_);
        inflight_.erase(key);
    }

    CompletionResult r;
    r.text = outcome.text;
    r.model_id = request.model_id;
    r.prompt_hash = key;
    r.attempt = outcome.attempt;
    r.latency_ms = outcome.latency_ms;
    return r;
}

StructuredResult Gateway::complete_structured(const CompletionRequest& request,
                                              const SchemaValidator& validator) {
    if (request.contract != ResponseContract::structured || request.schema_name.empty())
        throw GatewayError("complete_structured requires a structured response contract");

    const std::string base_user = request.user_text;
    std::vector<std::string> raw_replies;
    std::string last_error;
    std::string first_hash;

    for (int attempt = 1; attempt <= options_.structured_max_attempts; ++attempt) {
        CompletionRequest r = request;
        r.user_text = base_user + structured_output_suffix(request.schema_name);
        if (attempt > 1)
            r.user_text += structured_retry_suffix(request.schema_name, last_error, attempt);
        CompletionResult result = complete(r);
        if (attempt == 1) first_hash = result.prompt_hash;
        raw_replies.push_back(result.text);

        auto doc = extract_first_json(result.text);
        if (!doc) {
            last_error = "no parseable JSON document found";
            continue;
        }
        if (auto err = validator(*doc)) {
            last_error = *err;
            continue;
        }
        return {std::move(*doc), result.text, attempt, result.prompt_hash};
    }

    // exhaustion: preserve every raw reply for audit
    nlohmann::json failure = {{"schema", request.schema_name},
                              {"last_error", last_error},
                              {"raw_replies", raw_replies}};
    atomic_write_file(options_.audit_dir / "failures" / (first_hash + ".json"),
                      failure.dump(2) + "\n");
    throw StructuredOutputError(
        "structured output still invalid after " +
            std::to_string(options_.structured_max_attempts) + " attempt(s): " + last_error,
        raw_replies);
}

}  // namespace greenscore::llm
