#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/decimal.hpp"

namespace forge::dataset {

/// A source problem in GSM-8K interchange form: the solution text carries
/// inline <<expr=value>> calculator annotations and ends in a single
/// "#### <number>" final-answer line.
struct MathWordProblem {
    std::string id;
    std::string question;
    std::string solution;
};

/// An augmented problem. The solution is byte-identical to the source
/// problem's solution; only the question changed.
struct RevisedProblem {
    std::string source_id;
    std::string revised_question;
    std::string added_condition;
    std::string solution;
    int attempts = 1;
    bool multi_insertion = false;
};

/// One judge decision in writer-facing form (stage rendered as text).
struct VerdictSummary {
    std::string stage;
    bool pass = false;
    std::string explanation;
};

/// One output line: the accepted revision plus the context the interchange
/// format wants alongside it.
struct OutputRecord {
    RevisedProblem revised;
    std::string question_original;
    std::string source_solution;            // for the shared-solution assert
    std::vector<VerdictSummary> verdicts;   // final attempt's ladder verdicts
};

// --- parsing ---

/// Parses a UTF-8 line-delimited corpus. Each non-empty line is a JSON
/// record with "question" and "answer" fields and an optional "id"; ids
/// default to the zero-based line index rendered as a decimal string.
/// Throws MalformedRecordError, MissingFieldError, InvalidSolutionError.
std::vector<MathWordProblem> parse_corpus(std::istream& input);
std::vector<MathWordProblem> parse_corpus_file(const std::string& path);

/// Serializes problems back to the input format (used by round-trip tests).
void write_corpus(const std::vector<MathWordProblem>& problems, std::ostream& out);

/// Returns the canonicalized number following the last "####" marker.
/// Throws NoMarkerError / NonNumericPayloadError.
FinalAnswer extract_final_answer(std::string_view solution);

/// True when the solution holds exactly one line starting with "####".
bool has_single_final_marker(std::string_view solution);

// --- calculator annotations ---

struct AnnotationCheck {
    std::string annotation;   // inner text, e.g. "3*5=15"
    bool consistent = false;
};

/// One entry per <<expr=value>> occurrence, in order. consistent is true
/// when expr evaluates to value: exactly for integers, within 1e-6
/// relative tolerance otherwise. Throws UnbalancedAnnotationError when a
/// "<<" has no matching ">>".
std::vector<AnnotationCheck> check_calculator_annotations(std::string_view solution);

/// Evaluates an arithmetic expression over + - * / and parentheses.
/// Nullopt when the text does not parse.
std::optional<double> evaluate_arithmetic(std::string_view expr);

// --- added-condition extraction ---

struct ConditionExtraction {
    std::string condition;        // rendered span, boundary connectors trimmed
    bool multi_insertion = false; // more than one disjoint inserted run
};

/// Tokenizes question text: whitespace-delimited words with boundary
/// punctuation (.,;:!?"()') peeled off as separate single-char tokens.
/// Interior punctuation ($12, 1.5, 1,000, don't) stays attached.
std::vector<std::string> tokenize_question(std::string_view text);

/// Renders a token span back to text: words joined by single spaces,
/// punctuation tokens attached to the preceding word.
std::string render_tokens(const std::vector<std::string>& tokens);

/// Aligns the two questions by token LCS and returns the inserted span.
/// With several disjoint inserted runs, returns the longest and sets
/// multi_insertion. Throws NoInsertionError when nothing was inserted.
ConditionExtraction extract_added_condition(std::string_view original_q,
                                            std::string_view revised_q);

/// Collapses runs of whitespace to single spaces and trims the ends.
std::string normalize_whitespace(std::string_view text);

// --- output ---

/// Append-only line-delimited writer for accepted records. Flushes after
/// every record. Validates RevisedProblem invariants before writing and
/// throws InvariantViolationError when they fail.
class OutputWriter {
public:
    /// Opens `path` for appending (truncates first unless `append`).
    OutputWriter(const std::string& path, bool append);
    ~OutputWriter();
    OutputWriter(const OutputWriter&) = delete;
    OutputWriter& operator=(const OutputWriter&) = delete;

    void write(const OutputRecord& record);

    /// Serializes one record to its JSON line (no trailing newline).
    static std::string to_line(const OutputRecord& record);

private:
    struct Impl;
    Impl* impl_;
};

/// Checkpoint file: one processed source_id per line.
std::vector<std::string> read_checkpoint(const std::string& path);
void append_checkpoint(const std::string& path, const std::string& source_id);

}  // namespace forge::dataset
