#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/dataset.hpp"
#include "forge/llm_client.hpp"
#include "forge/prompts.hpp"

namespace forge::pipeline {

using prompts::StageId;

/// One judge decision. raw_response starts with YES or NO (after trimming);
/// explanation is non-empty exactly when the verdict fails.
struct StageVerdict {
    StageId stage = StageId::QuantitativeCheck;
    bool pass = false;
    std::string explanation;
    std::string raw_response;
};

struct ParsedVerdict {
    bool pass = false;
    std::string explanation;
};

/// Classifies a judge response by its YES/NO prefix: case-insensitive, the
/// prefix must be followed by end-of-text, whitespace, or one of ". , :".
/// Throws MalformedVerdictError otherwise.
ParsedVerdict parse_verdict(const std::string& raw);

/// What a failed attempt feeds back into the generator.
struct RegenerationContext {
    StageId stage = StageId::QuantitativeCheck;
    std::string prior_revision;
    std::string explanation;
};

struct Attempt {
    int index = 1;
    std::string revised_question;
    std::vector<StageVerdict> verdicts;  // ladder order; a failing verdict is last
    std::optional<std::pair<StageId, std::string>> regenerated_from;
};

struct PipelineTrace {
    enum class Kind { Accepted, Exhausted, GeneratorError };

    std::string source_id;
    std::vector<Attempt> attempts;
    Kind kind = Kind::GeneratorError;
    std::optional<dataset::RevisedProblem> accepted;  // Accepted only
    std::optional<StageId> exhausted_stage;           // Exhausted only
    std::string error_detail;                         // GeneratorError only
};

std::string to_string(PipelineTrace::Kind kind);

/// Line-delimited trace record (source_id, outcome, attempts).
std::string trace_to_line(const PipelineTrace& trace);
PipelineTrace trace_from_line(const std::string& line);

enum class RerunPolicy { RerunAll };

struct PipelineConfig {
    int max_attempts = 4;  // 1 initial + 3 regenerations
    std::vector<StageId> judge_ladder{StageId::SolutionConsistencyCheck, StageId::QuantitativeCheck,
                                      StageId::DifficultyCheck, StageId::DesirableCheck,
                                      StageId::UndesirableCheck};
    RerunPolicy rerun_policy = RerunPolicy::RerunAll;
    int concurrency = 1;
};

struct ModelRoles {
    std::string generator_model = "gpt-3.5-turbo";
    std::string judge_model = "gpt-3.5-turbo";
    double generator_temperature = 0.7;
    double judge_temperature = 0.0;
    int generator_max_tokens = 512;
    int judge_max_tokens = 192;
};

struct CorpusSinks {
    std::string output_path;
    std::string traces_path;
    std::string checkpoint_path;
    bool resume = false;  // skip checkpointed ids, append to existing sinks
};

struct RunSummary {
    std::int64_t accepted = 0;
    std::int64_t exhausted = 0;
    std::int64_t errored = 0;
    std::int64_t skipped = 0;
    std::map<std::string, llm::UsageTotals> usage_per_stage;
    llm::UsageTotals usage;

    int exit_status() const { return errored == 0 ? 0 : 2; }
};

class Pipeline {
public:
    Pipeline(llm::ChatClient& client, const prompts::TemplateRegistry& templates, ModelRoles roles,
             PipelineConfig config);

    /// Step-1 generation, or regeneration when ctx is set. Returns the
    /// completion stripped of a leading "New Question:"-style label.
    /// Throws EmptyGenerationError; backend errors propagate.
    std::string generate_candidate(const dataset::MathWordProblem& problem,
                                   const std::optional<RegenerationContext>& ctx, int attempt);

    /// Renders the stage prompt (Q1 = original, Q2 = revised), calls the
    /// judge model, parses the verdict. A malformed verdict is retried once,
    /// then MalformedVerdictError propagates.
    StageVerdict run_judge(StageId stage, const std::string& original_q, const std::string& revised_q,
                           const std::string& solution, const std::string& source_id, int attempt);

    /// Full generate -> judge ladder -> regenerate loop for one problem.
    /// Judge rejections are never errors; unrecoverable backend or parse
    /// failures become a GeneratorError outcome.
    PipelineTrace process_problem(const dataset::MathWordProblem& problem);

    using ProgressFn = std::function<void(const PipelineTrace&)>;

    /// Runs the corpus through the pipeline with checkpointed resume.
    /// Accepted records go to the output sink, every trace to the trace
    /// sink; each completed id is appended to the checkpoint after its
    /// records are durably written. `stop` requests a graceful stop:
    /// in-flight problems finish and the sinks stay valid.
    RunSummary process_corpus(const std::vector<dataset::MathWordProblem>& problems, const CorpusSinks& sinks,
                              const ProgressFn& on_done = nullptr, const std::atomic<bool>* stop = nullptr);

    const PipelineConfig& config() const { return config_; }

private:
    StageVerdict judge_once(StageId stage, const std::string& prompt_text, const std::string& source_id, int attempt);

    llm::ChatClient& client_;
    const prompts::TemplateRegistry& templates_;
    ModelRoles roles_;
    PipelineConfig config_;
};

/// Writer-facing verdict rows for the final attempt of an accepted trace.
std::vector<dataset::VerdictSummary> verdict_summaries(const PipelineTrace& trace);

}  // namespace forge::pipeline
