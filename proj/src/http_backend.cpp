#include "forge/http_backend.hpp"

#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "forge/errors.hpp"

namespace forge::llm {

std::chrono::milliseconds RetryPolicy::delay(int failure_count, std::mt19937_64& rng) const {
    if (failure_count < 1) failure_count = 1;
    double ceiling = static_cast<double>(base.count());
    for (int i = 1; i < failure_count && ceiling < static_cast<double>(cap.count()); ++i) ceiling *= 2.0;
    auto bound = std::min<std::int64_t>(static_cast<std::int64_t>(ceiling), cap.count());
    std::uniform_int_distribution<std::int64_t> jitter(0, bound);
    return std::chrono::milliseconds(jitter(rng));
}

std::pair<std::string, std::string> split_api_base(const std::string& api_base) {
    std::size_t host_start = 0;
    if (std::size_t scheme = api_base.find("://"); scheme != std::string::npos) host_start = scheme + 3;
    std::size_t path_start = api_base.find('/', host_start);
    std::string origin = path_start == std::string::npos ? api_base : api_base.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "" : api_base.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {origin, path};
}

struct HttpBackend::Impl {
    explicit Impl(HttpBackendOptions opts)
        : options(std::move(opts)),
          in_flight(options.max_in_flight > 0 ? options.max_in_flight : 1),
          rng(options.jitter_seed != 0 ? options.jitter_seed : std::random_device{}()) {
        std::tie(origin, path_prefix) = split_api_base(options.api_base);
        if (!options.sleep) {
            options.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
        }
    }

    std::chrono::milliseconds next_delay(int failure_count) {
        std::lock_guard lock(rng_mutex);
        return options.retry.delay(failure_count, rng);
    }

    HttpBackendOptions options;
    std::string origin;
    std::string path_prefix;
    std::counting_semaphore<0x7fffffff> in_flight;
    std::mutex rng_mutex;
    std::mt19937_64 rng;
};

HttpBackend::HttpBackend(HttpBackendOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

HttpBackend::~HttpBackend() = default;

namespace {

struct SemaphoreGuard {
    explicit SemaphoreGuard(std::counting_semaphore<0x7fffffff>& sem) : sem_(sem) { sem_.acquire(); }
    ~SemaphoreGuard() { sem_.release(); }
    std::counting_semaphore<0x7fffffff>& sem_;
};

nlohmann::json request_body(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& message : request.messages) {
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    }
    nlohmann::json body{{"model", request.model},
                        {"messages", std::move(messages)},
                        {"temperature", request.temperature},
                        {"max_tokens", request.max_output_tokens}};
    if (request.seed) body["seed"] = *request.seed;
    return body;
}

CompletionResult parse_response(const std::string& body) {
    nlohmann::json payload;
    try {
        payload = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("unparseable response body: ") + e.what());
    }
    if (!payload.contains("choices") || !payload["choices"].is_array() || payload["choices"].empty()) {
        throw TransportError("response carries no choices");
    }
    const auto& choice = payload["choices"][0];
    if (choice.value("finish_reason", "") == "content_filter") throw ContentFilteredError();
    if (!choice.contains("message") || !choice["message"].contains("content")) {
        throw TransportError("response choice carries no message content");
    }

    CompletionResult result;
    result.text = choice["message"]["content"].get<std::string>();
    if (payload.contains("usage")) {
        result.usage.prompt_tokens = payload["usage"].value("prompt_tokens", 0);
        result.usage.completion_tokens = payload["usage"].value("completion_tokens", 0);
    }
    return result;
}

}  // namespace

CompletionResult HttpBackend::complete(const CompletionRequest& request) {
    if (impl_->options.api_key.empty()) throw AuthError("no API key configured");

    const std::string body = request_body(request).dump();
    const std::string path = impl_->path_prefix + "/chat/completions";
    const httplib::Headers headers{{"Authorization", "Bearer " + impl_->options.api_key}};

    std::string last_detail;
    bool last_was_rate_limit = false;
    const int max_tries = impl_->options.retry.max_tries;
    const auto started = std::chrono::steady_clock::now();

    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        std::string detail;
        {
            SemaphoreGuard guard(impl_->in_flight);
            httplib::Client client(impl_->origin);
            client.set_connection_timeout(impl_->options.read_timeout);
            client.set_read_timeout(impl_->options.read_timeout);
            client.set_write_timeout(impl_->options.read_timeout);

            httplib::Result res = client.Post(path, headers, body, "application/json");
            if (res) {
                const int status = res->status;
                if (status == 401 || status == 403) {
                    throw AuthError("endpoint returned HTTP " + std::to_string(status));
                }
                if (status == 200) {
                    CompletionResult result = parse_response(res->body);
                    result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - started);
                    return result;
                }
                if (status != 429 && status < 500) {
                    throw TransportError("endpoint rejected the request with HTTP " + std::to_string(status) + ": " +
                                         res->body);
                }
                last_was_rate_limit = status == 429;
                detail = "HTTP " + std::to_string(status);
            } else {
                last_was_rate_limit = false;
                detail = httplib::to_string(res.error());
            }
        }
        last_detail = detail;
        if (attempt < max_tries) impl_->options.sleep(impl_->next_delay(attempt));
    }

    if (last_was_rate_limit) throw RateLimitedError(last_detail);
    throw TransportError(last_detail + " after " + std::to_string(max_tries) + " tries");
}

}  // namespace forge::llm
