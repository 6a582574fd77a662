#include "forge/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "forge/errors.hpp"

namespace forge::dataset {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

// Final-answer marker: a line whose first non-blank characters are "####".
std::vector<std::string_view> marker_payloads(std::string_view solution) {
    std::vector<std::string_view> payloads;
    std::size_t pos = 0;
    while (pos <= solution.size()) {
        std::size_t eol = solution.find('\n', pos);
        std::string_view line = solution.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        std::size_t first = 0;
        while (first < line.size() && is_space(line[first])) ++first;
        if (line.substr(first).starts_with("####")) payloads.push_back(line.substr(first + 4));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return payloads;
}

void validate_problem(const MathWordProblem& problem, std::size_t line_no) {
    if (trim(problem.question).empty()) {
        throw MalformedRecordError(line_no, "question is empty");
    }
    auto payloads = marker_payloads(problem.solution);
    if (payloads.empty()) {
        throw InvalidSolutionError(line_no, "final-answer marker is missing");
    }
    if (payloads.size() > 1) {
        throw InvalidSolutionError(line_no, "final-answer marker is duplicated");
    }
    if (!FinalAnswer::parse(payloads.back())) {
        throw InvalidSolutionError(line_no,
                                   "final-answer payload is not numeric: \"" + std::string(payloads.back()) + "\"");
    }
}

}  // namespace

std::vector<MathWordProblem> parse_corpus(std::istream& input) {
    std::vector<MathWordProblem> problems;
    std::string line;
    std::size_t line_no = 0;
    for (; std::getline(input, line); ++line_no) {
        if (trim(line).empty()) continue;

        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedRecordError(line_no, e.what());
        }
        if (!record.is_object()) throw MalformedRecordError(line_no, "record is not an object");

        MathWordProblem problem;
        for (const char* field : {"question", "answer"}) {
            if (!record.contains(field)) throw MissingFieldError(line_no, field);
            if (!record[field].is_string()) throw MalformedRecordError(line_no, std::string(field) + " is not a string");
        }
        problem.question = record["question"].get<std::string>();
        problem.solution = record["answer"].get<std::string>();
        if (record.contains("id")) {
            problem.id = record["id"].is_string() ? record["id"].get<std::string>() : record["id"].dump();
        } else {
            problem.id = std::to_string(line_no);
        }

        validate_problem(problem, line_no);
        problems.push_back(std::move(problem));
    }
    return problems;
}

std::vector<MathWordProblem> parse_corpus_file(const std::string& path) {
    std::ifstream input(path, std::ios::binary);
    if (!input) throw IoError("cannot open corpus file: " + path);
    return parse_corpus(input);
}

void write_corpus(const std::vector<MathWordProblem>& problems, std::ostream& out) {
    for (const auto& problem : problems) {
        ordered_json record;
        record["id"] = problem.id;
        record["question"] = problem.question;
        record["answer"] = problem.solution;
        out << record.dump() << '\n';
    }
    if (!out) throw IoError("failed writing corpus");
}

FinalAnswer extract_final_answer(std::string_view solution) {
    auto payloads = marker_payloads(solution);
    if (payloads.empty()) throw NoMarkerError();
    auto parsed = FinalAnswer::parse(payloads.back());
    if (!parsed) throw NonNumericPayloadError(trim(payloads.back()));
    return *parsed;
}

bool has_single_final_marker(std::string_view solution) {
    return marker_payloads(solution).size() == 1;
}

// --- arithmetic over + - * / used to verify annotations ---

namespace {

struct ExprParser {
    std::string_view text;
    std::size_t pos = 0;
    bool ok = true;

    void skip_filler() {
        while (pos < text.size() && (is_space(text[pos]) || text[pos] == '$')) ++pos;
    }

    std::optional<double> number() {
        skip_filler();
        std::size_t start = pos;
        std::string digits;
        bool seen_digit = false;
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits.push_back(c);
                seen_digit = true;
            } else if (c == ',' && seen_digit) {
                // thousands separator
            } else if (c == '.' && digits.find('.') == std::string::npos) {
                digits.push_back(c);
            } else {
                break;
            }
            ++pos;
        }
        if (!seen_digit) {
            pos = start;
            return std::nullopt;
        }
        return std::stod(digits);
    }

    double primary() {
        skip_filler();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            double value = expr();
            skip_filler();
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
            } else {
                ok = false;
            }
            return value;
        }
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            return -primary();
        }
        auto value = number();
        if (!value) ok = false;
        return value.value_or(0.0);
    }

    double term() {
        double value = primary();
        while (ok) {
            skip_filler();
            if (pos < text.size() && (text[pos] == '*' || text[pos] == '/')) {
                char op = text[pos++];
                double rhs = primary();
                value = op == '*' ? value * rhs : value / rhs;
            } else {
                break;
            }
        }
        return value;
    }

    double expr() {
        double value = term();
        while (ok) {
            skip_filler();
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                char op = text[pos++];
                double rhs = term();
                value = op == '+' ? value + rhs : value - rhs;
            } else {
                break;
            }
        }
        return value;
    }
};

bool is_integral(double value) { return std::abs(value - std::round(value)) < 1e-9; }

bool values_match(double computed, double stated) {
    if (std::isnan(computed) || std::isnan(stated)) return false;
    if (is_integral(computed) && is_integral(stated)) {
        return std::llround(computed) == std::llround(stated);
    }
    return std::abs(computed - stated) <= 1e-6 * std::max(1.0, std::abs(stated));
}

}  // namespace

std::optional<double> evaluate_arithmetic(std::string_view expr_text) {
    ExprParser parser{expr_text};
    double value = parser.expr();
    parser.skip_filler();
    if (!parser.ok || parser.pos != parser.text.size()) return std::nullopt;
    return value;
}

std::vector<AnnotationCheck> check_calculator_annotations(std::string_view solution) {
    std::vector<AnnotationCheck> checks;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = solution.find("<<", pos);
        if (open == std::string_view::npos) break;
        std::size_t close = solution.find(">>", open + 2);
        if (close == std::string_view::npos) throw UnbalancedAnnotationError(open);

        AnnotationCheck check;
        check.annotation = std::string(solution.substr(open + 2, close - open - 2));
        std::size_t eq = check.annotation.rfind('=');
        if (eq != std::string::npos) {
            auto computed = evaluate_arithmetic(std::string_view(check.annotation).substr(0, eq));
            auto stated = evaluate_arithmetic(std::string_view(check.annotation).substr(eq + 1));
            check.consistent = computed && stated && values_match(*computed, *stated);
        }
        checks.push_back(std::move(check));
        pos = close + 2;
    }
    return checks;
}

// --- added-condition extraction ---

namespace {

bool is_peel_punct(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

bool is_punct_token(const std::string& token) {
    return token.size() == 1 && is_peel_punct(token[0]);
}

bool is_connector_token(const std::string& token) {
    return token.size() == 1 && (token[0] == ',' || token[0] == ';' || token[0] == ':');
}

}  // namespace

std::vector<std::string> tokenize_question(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size()) break;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        std::string_view piece = text.substr(start, i - start);

        // Trailing sentence punctuation becomes separate tokens; interior
        // punctuation ($12, 1.5, 1,000, don't) stays inside the word.
        std::size_t stem_end = piece.size();
        while (stem_end > 0 && is_peel_punct(piece[stem_end - 1])) --stem_end;
        if (stem_end > 0) tokens.emplace_back(piece.substr(0, stem_end));
        for (std::size_t k = stem_end; k < piece.size(); ++k) tokens.emplace_back(1, piece[k]);
    }
    return tokens;
}

std::string render_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& token : tokens) {
        if (!out.empty() && !is_punct_token(token)) out.push_back(' ');
        out += token;
    }
    return out;
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

ConditionExtraction extract_added_condition(std::string_view original_q, std::string_view revised_q) {
    const auto a = tokenize_question(original_q);
    const auto b = tokenize_question(revised_q);
    if (a.empty() || b.empty()) throw Error("cannot align empty question text");

    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1
                                    : std::max(dp[i + 1][j], dp[i][j + 1]);
        }
    }

    // Walk one optimal alignment; revised tokens never matched are insertions.
    std::vector<bool> inserted(m, true);
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j] && dp[i][j] == dp[i + 1][j + 1] + 1) {
            inserted[j] = false;
            ++i;
            ++j;
        } else if (dp[i][j + 1] >= dp[i + 1][j]) {
            ++j;
        } else {
            ++i;
        }
    }

    // Maximal stretches of inserted tokens; stretches that are pure
    // punctuation are re-punctuation noise, not conditions.
    struct Run {
        std::size_t begin, end;
        bool contentful;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k < m;) {
        if (!inserted[k]) {
            ++k;
            continue;
        }
        Run run{k, k, false};
        while (k < m && inserted[k]) {
            if (!is_punct_token(b[k])) run.contentful = true;
            ++k;
        }
        run.end = k;
        if (run.contentful) runs.push_back(run);
    }
    if (runs.empty()) throw NoInsertionError();

    const Run* longest = &runs.front();
    for (const Run& run : runs) {
        if (run.end - run.begin > longest->end - longest->begin) longest = &run;
    }

    std::size_t begin = longest->begin;
    std::size_t end = longest->end;
    while (begin < end && is_punct_token(b[begin])) ++begin;
    while (end > begin && is_connector_token(b[end - 1])) --end;

    ConditionExtraction result;
    result.condition = render_tokens(std::vector<std::string>(b.begin() + begin, b.begin() + end));
    result.multi_insertion = runs.size() > 1;
    return result;
}

// --- output writer ---

struct OutputWriter::Impl {
    std::ofstream stream;
    std::string path;
};

OutputWriter::OutputWriter(const std::string& path, bool append) : impl_(new Impl) {
    impl_->path = path;
    impl_->stream.open(path, append ? std::ios::app : std::ios::trunc);
    if (!impl_->stream) {
        delete impl_;
        throw IoError("cannot open output file: " + path);
    }
}

OutputWriter::~OutputWriter() { delete impl_; }

std::string OutputWriter::to_line(const OutputRecord& record) {
    ordered_json verdicts = ordered_json::array();
    for (const auto& verdict : record.verdicts) {
        verdicts.push_back({{"stage", verdict.stage}, {"pass", verdict.pass}, {"explanation", verdict.explanation}});
    }
    ordered_json line;
    line["source_id"] = record.revised.source_id;
    line["question_original"] = record.question_original;
    line["question_revised"] = record.revised.revised_question;
    line["added_condition"] = record.revised.added_condition;
    line["solution"] = record.revised.solution;
    line["final_answer"] = extract_final_answer(record.revised.solution).canonical();
    line["attempts"] = record.revised.attempts;
    line["verdicts"] = std::move(verdicts);
    line["multi_insertion"] = record.revised.multi_insertion;
    return line.dump();
}

void OutputWriter::write(const OutputRecord& record) {
    const auto& revised = record.revised;
    if (revised.solution != record.source_solution) {
        throw InvariantViolationError(revised.source_id, "solution differs from the source solution");
    }
    if (revised.attempts < 1) {
        throw InvariantViolationError(revised.source_id, "attempts < 1");
    }
    if (normalize_whitespace(revised.revised_question).find(normalize_whitespace(revised.added_condition)) ==
        std::string::npos) {
        throw InvariantViolationError(revised.source_id, "added_condition is not a substring of the revised question");
    }
    impl_->stream << to_line(record) << '\n' << std::flush;
    if (!impl_->stream) throw IoError("failed writing record to " + impl_->path);
}

std::vector<std::string> read_checkpoint(const std::string& path) {
    std::vector<std::string> ids;
    std::ifstream input(path);
    if (!input) return ids;
    std::string line;
    while (std::getline(input, line)) {
        std::string id = trim(line);
        if (!id.empty()) ids.push_back(std::move(id));
    }
    return ids;
}

void append_checkpoint(const std::string& path, const std::string& source_id) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot open checkpoint file: " + path);
    out << source_id << '\n' << std::flush;
    if (!out) throw IoError("failed appending to checkpoint file: " + path);
}

}  // namespace forge::dataset
