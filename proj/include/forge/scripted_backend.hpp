#pragma once

#include <map>
#include <string>
#include <tuple>

#include "forge/llm_client.hpp"

namespace forge::llm {

/// Deterministic backend for tests and offline runs: responses come from a
/// (stage, source_id, attempt) -> text table with a default fallback, so
/// lookups are total and results carry no wall-clock dependence.
class ScriptedBackend : public ChatBackend {
public:
    using Key = std::tuple<std::string, std::string, int>;

    explicit ScriptedBackend(std::string default_response = "YES")
        : default_response_(std::move(default_response)) {}

    /// Loads a line-delimited script file with fields
    /// stage / source_id / attempt / response.
    static ScriptedBackend from_file(const std::string& path, std::string default_response = "YES");

    void add(const std::string& stage, const std::string& source_id, int attempt, std::string response) {
        script_[Key{stage, source_id, attempt}] = std::move(response);
    }

    CompletionResult complete(const CompletionRequest& request) override;

private:
    std::map<Key, std::string> script_;
    std::string default_response_;
};

}  // namespace forge::llm
