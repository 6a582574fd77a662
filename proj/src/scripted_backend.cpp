#include "forge/scripted_backend.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "forge/errors.hpp"

namespace forge::llm {

namespace {

std::int64_t count_tokens(const std::string& text) {
    std::istringstream stream(text);
    std::string word;
    std::int64_t count = 0;
    while (stream >> word) ++count;
    return count;
}

}  // namespace

ScriptedBackend ScriptedBackend::from_file(const std::string& path, std::string default_response) {
    std::ifstream input(path);
    if (!input) throw IoError("cannot open script file: " + path);

    ScriptedBackend backend(std::move(default_response));
    std::string line;
    std::size_t line_no = 0;
    for (; std::getline(input, line); ++line_no) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedRecordError(line_no, e.what());
        }
        for (const char* field : {"stage", "source_id", "attempt", "response"}) {
            if (!record.contains(field)) throw MissingFieldError(line_no, field);
        }
        backend.add(record["stage"].get<std::string>(),
                    record["source_id"].is_string() ? record["source_id"].get<std::string>()
                                                    : record["source_id"].dump(),
                    record["attempt"].get<int>(), record["response"].get<std::string>());
    }
    return backend;
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
    const auto it = script_.find(Key{request.tag.stage, request.tag.source_id, request.tag.attempt});
    CompletionResult result;
    result.text = it != script_.end() ? it->second : default_response_;
    for (const auto& message : request.messages) result.usage.prompt_tokens += count_tokens(message.content);
    result.usage.completion_tokens = count_tokens(result.text);
    return result;
}

}  // namespace forge::llm
