#include "forge/llm_client.hpp"

namespace forge::llm {

std::string to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

void UsageLedger::record(const std::string& stage, const Usage& usage) {
    std::lock_guard lock(mutex_);
    auto& totals = per_stage_[stage.empty() ? "(untagged)" : stage];
    totals.calls += 1;
    totals.prompt_tokens += usage.prompt_tokens;
    totals.completion_tokens += usage.completion_tokens;
}

std::map<std::string, UsageTotals> UsageLedger::per_stage() const {
    std::lock_guard lock(mutex_);
    return per_stage_;
}

UsageTotals UsageLedger::total() const {
    std::lock_guard lock(mutex_);
    UsageTotals sum;
    for (const auto& [stage, totals] : per_stage_) {
        sum.calls += totals.calls;
        sum.prompt_tokens += totals.prompt_tokens;
        sum.completion_tokens += totals.completion_tokens;
    }
    return sum;
}

CompletionResult ChatClient::complete(const CompletionRequest& request) {
    CompletionResult result = backend_->complete(request);
    ledger_.record(request.tag.stage, result.usage);
    return result;
}

}  // namespace forge::llm
