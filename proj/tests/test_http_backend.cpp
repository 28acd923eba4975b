#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "greenscore/llm/http_backend.hpp"
#include "greenscore/util.hpp"

using namespace greenscore;
using namespace greenscore::llm;

namespace {

// Local OpenAI-compatible stub server for exercising the wire protocol.
class StubServer {
public:
    StubServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            ++requests_;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            if (fail_first_ > 0) {
                --fail_first_;
                res.status = 500;
                res.set_content("upstream hiccup", "text/plain");
                return;
            }
            if (reject_status_ != 0) {
                res.status = reject_status_;
                res.set_content("{\"error\": \"denied\"}", "application/json");
                return;
            }
            nlohmann::json body = nlohmann::json::parse(req.body);
            nlohmann::json reply = {
                {"choices",
                 {{{"message",
                    {{"role", "assistant"},
                     {"content", "echo:" + body["messages"].back()["content"].get<std::string>()}}}}}}};
            res.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> requests_{0};
    int fail_first_ = 0;
    int reject_status_ = 0;
    std::string last_body_;
    std::string last_auth_;
};

CompletionRequest sample_request() {
    CompletionRequest request;
    request.model_id = "test-model";
    request.system_text = "be terse";
    request.user_text = "ping";
    request.temperature = 0.0;
    request.max_output_tokens = 64;
    return request;
}

struct EnvGuard {
    EnvGuard(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
    ~EnvGuard() { unsetenv(name_); }
    const char* name_;
};

}  // namespace

TEST_CASE("missing credential fails before any network activity") {
    unsetenv("GS_TEST_KEY");
    HttpBackendOptions options;
    options.base_url = "http://127.0.0.1:1/v1";  // nothing listens here
    options.credential_env = "GS_TEST_KEY";
    CHECK_THROWS_WITH_AS(HttpBackend{options}, doctest::Contains("credential missing"),
                         ConfigError);
}

TEST_CASE("openai-compatible request and reply shapes") {
    EnvGuard key("GS_TEST_KEY", "sk-test-123");
    StubServer server;
    HttpBackendOptions options;
    options.base_url = server.base_url();
    options.credential_env = "GS_TEST_KEY";
    HttpBackend backend(options);

    auto reply = backend.complete(sample_request());
    CHECK(reply == "echo:ping");
    CHECK(server.last_auth_ == "Bearer sk-test-123");

    auto body = nlohmann::json::parse(server.last_body_);
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["max_tokens"] == 64);
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][0]["content"] == "be terse");
    CHECK(body["messages"][1]["role"] == "user");
    CHECK(body["messages"][1]["content"] == "ping");
}

TEST_CASE("5xx maps to a retryable error, 4xx to a fatal one") {
    EnvGuard key("GS_TEST_KEY", "sk-test-123");
    StubServer server;
    HttpBackendOptions options;
    options.base_url = server.base_url();
    options.credential_env = "GS_TEST_KEY";
    HttpBackend backend(options);

    server.fail_first_ = 1;
    try {
        (void)backend.complete(sample_request());
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.retryable);
        CHECK(e.status == 500);
    }
    // next call goes through
    CHECK(backend.complete(sample_request()) == "echo:ping");

    server.reject_status_ = 401;
    try {
        (void)backend.complete(sample_request());
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK_FALSE(e.retryable);
        CHECK(e.status == 401);
    }
}

TEST_CASE("unreachable host is a retryable transport failure") {
    EnvGuard key("GS_TEST_KEY", "sk-test-123");
    HttpBackendOptions options;
    options.base_url = "http://127.0.0.1:9/v1";  // discard port; nothing listens
    options.credential_env = "GS_TEST_KEY";
    options.timeout_seconds = 1;
    HttpBackend backend(options);
    try {
        (void)backend.complete(sample_request());
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.retryable);
    }
}
