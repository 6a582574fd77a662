#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace forge::llm {

enum class Role { System, User, Assistant };

std::string to_string(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

/// Routing metadata carried alongside a request: the pipeline stage the
/// call belongs to (usage accounting, script lookup) plus the problem id
/// and attempt number (script lookup only).
struct RequestTag {
    std::string stage;
    std::string source_id;
    int attempt = 1;
};

struct CompletionRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_output_tokens = 512;
    std::optional<std::int64_t> seed;
    RequestTag tag;
};

struct Usage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct CompletionResult {
    std::string text;
    Usage usage;
    std::chrono::milliseconds latency{0};
};

/// Provider-agnostic chat-completion backend.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

struct UsageTotals {
    std::int64_t calls = 0;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

/// Per-stage usage counters. Thread-safe; totals never decrease within a run.
class UsageLedger {
public:
    void record(const std::string& stage, const Usage& usage);
    std::map<std::string, UsageTotals> per_stage() const;
    UsageTotals total() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, UsageTotals> per_stage_;
};

/// Thin front door: forwards to the backend and accounts usage per stage.
class ChatClient {
public:
    explicit ChatClient(std::shared_ptr<ChatBackend> backend) : backend_(std::move(backend)) {}

    CompletionResult complete(const CompletionRequest& request);

    const UsageLedger& usage() const { return ledger_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    UsageLedger ledger_;
};

}  // namespace forge::llm
