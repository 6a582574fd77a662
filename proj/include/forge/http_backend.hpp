#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>

#include "forge/llm_client.hpp"

namespace forge::llm {

/// Retry schedule for transient failures: exponential backoff with full
/// jitter, base 1s, cap 60s, at most 5 tries.
struct RetryPolicy {
    int max_tries = 5;
    std::chrono::milliseconds base{1000};
    std::chrono::milliseconds cap{60000};

    /// Uniform draw from [0, min(cap, base * 2^(failure_count - 1))].
    std::chrono::milliseconds delay(int failure_count, std::mt19937_64& rng) const;
};

struct HttpBackendOptions {
    std::string api_base;                   // e.g. "https://api.example.com/v1"
    std::string api_key;
    RetryPolicy retry;
    std::chrono::seconds read_timeout{120};
    int max_in_flight = 8;
    /// Injectable sleep so tests run without wall-clock waits.
    std::function<void(std::chrono::milliseconds)> sleep;
    std::uint64_t jitter_seed = 0;          // 0 = seed from random_device
};

/// Live backend for any chat-completions-compatible HTTP endpoint.
/// POSTs to <api_base>/chat/completions; retries 429/5xx/timeouts per the
/// policy; never retries auth failures or malformed-request rejections.
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendOptions options);
    ~HttpBackend() override;

    CompletionResult complete(const CompletionRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits an api_base URL into (scheme://host[:port], path_prefix).
std::pair<std::string, std::string> split_api_base(const std::string& api_base);

/// Name of the environment variable the credential is read from.
inline constexpr const char* kApiKeyEnvVar = "DISTRACTOR_FORGE_API_KEY";

}  // namespace forge::llm
