#include "forge/prompts.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "forge/errors.hpp"

namespace forge::prompts {

namespace {

// The six published prompt bodies, plus the solution-consistency judge that
// runs right after generation. Slot markers use the {Slot Name} syntax.

constexpr const char* kInitialGeneration =
    R"PROMPT(Revise this question by adding one irrelevant condition or value, while keeping the solution still the same.

The irrelevant condition or value do not alter the reasoning path of the question.

The irrelevant condition or value does not introduce new background stories, rather, it is related to the entities in original question.

Directly give the full revised question without explanations.

Example

Original Question: Five friends eat at a fast-food chain and order the following: 5 pieces of hamburger that cost $3 each ... How much will each of them pay if they will split the bill equally?

Shared Solution: The cost of 5 pieces of hamburger is $3 x 5 = $<<3*5=15>>15 ... So their total bill is $15 + $4.80 + $2.50 +$2.7 = <<15+4.8+2.5+2.7=25>>25. Hence, each of the five friends will contribute $25/5 = $<<25/5=5>>5.

#### 5

Added Irrelevant Condition: There will be additional $5 service fee when the total bill is more than $26.

New Question: Five friends eat at a fast-food chain and order the following: 5 pieces of hamburger that cost $3 each ... There will be additional $5 service fee when the total bill is more than $26. How much will each of them pay if they will split the bill equally?

Original Question: {Question}

Shared Solution: {Solution}

New Question:)PROMPT";

constexpr const char* kQuantitativeCheck =
    R"PROMPT(Compare the two questions, find the condition that Q2 have but Q1 does not have. Check whether this condition introduces any new quantitative relationships or new values. If so, just say YES without other explanation; if not, explain why (within 100 words). Start your response with "YES" or "NO".

Q1: {Original Question}

Q2: {Revised Question})PROMPT";

constexpr const char* kDifficultyCheck =
    R"PROMPT(These questions have the same solution; check if Q2 is more challenging to solve than Q1 by adding irrelevant conditions. Possible cases include: Q2 introduces seemingly relevant but useless conditions; Q2 introduces seemingly relevant values useless in solution; Q2 decomposes conditions or values with additional solution steps. If Q2 is more challenging than Q1, just say YES without other explanation; if not or similar, explain why (within 100 words). Start your response with "YES" or "NO".

Q1: {Original Question}

Q2: {Revised Question})PROMPT";

constexpr const char* kDesirableCheck =
    R"PROMPT(Compare the two questions, find the additional condition in Q2 compared with Q1. Check if the additional condition complies with all the following rules one by one. If it complies with all rules, just say YES; if not, explain why (within 100 words). Start your response with "YES" or "NO".

Q1: {Original Question}

Q2: {Revised Question}

Rules: The additional condition
- should be counterparts or features of existing entities in Q1;
- should have direct quantitative relationships with the entities in Q1;
- should mention something seems related to the story but useless for solving the Q2;
- should be consistent and reconcilable with the story in Q1;
- should avoid conjunctions of contrast (e.g., however, but, though);
- should keep the range covered by plural pronouns the same.)PROMPT";

constexpr const char* kUndesirableCheck =
    R"PROMPT(Compare the two questions, find the additional condition in Q2 compared with Q1. Check if the additional condition complies with all the following rules one by one. If it complies with all rules, just say YES; if not, explain why (within 100 words). Start your response with "YES" or "NO".

Q1: {Original Question}

Q2: {Revised Question}

Rules: The additional condition
- should NOT alter the reasoning path of the original question;
- should NOT introduce new background stories;
- should NOT be impossible to lead to any other feasible calculation-needed solution even the question is changed;
- should NOT make the pronouns ambiguous;
- should NOT give explicit hints stating the additional condition is unnecessary to solve the question (e.g., 'but he doesn't buy any', 'but she is not interested in it', 'but it isn't counted in');)PROMPT";

constexpr const char* kSolutionConsistencyCheck =
    R"PROMPT(These questions share one solution; check if the solution still correctly solves Q2. The reasoning steps, the equations, and the final answer must all remain valid for Q2 without any change. If the solution still solves Q2, just say YES without other explanation; if not, explain why (within 100 words). Start your response with "YES" or "NO".

Q1: {Original Question}

Q2: {Revised Question}

Solution: {Solution})PROMPT";

constexpr const char* kRegeneration =
    R"PROMPT(The question you generate does not comply with all the requirements. Considering the following explanation on your errors, revise the question again. Take the error and initial requirements into consideration. Directly give the full revised question without explanations.

Q1: {Original Question}

Q2: {Revised Question}

Explanation: {Explanation})PROMPT";

const std::array<const char*, 5> kSlotNames = {
    "Question", "Solution", "Original Question", "Revised Question", "Explanation"};

std::vector<std::string> scan_slots(const std::string& body) {
    std::vector<std::string> slots;
    for (const char* name : kSlotNames) {
        if (body.find("{" + std::string(name) + "}") != std::string::npos) slots.emplace_back(name);
    }
    return slots;
}

std::string replace_all(std::string text, const std::string& marker, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(marker, pos)) != std::string::npos) {
        text.replace(pos, marker.size(), value);
        pos += value.size();
    }
    return text;
}

PromptTemplate make_template(StageId stage, const char* body, bool has_demonstration = false) {
    PromptTemplate tmpl;
    tmpl.stage = stage;
    tmpl.body = body;
    tmpl.slots = scan_slots(tmpl.body);
    tmpl.has_demonstration = has_demonstration;
    return tmpl;
}

}  // namespace

int step_number(StageId stage) {
    switch (stage) {
        case StageId::InitialGeneration: return 1;
        case StageId::QuantitativeCheck: return 2;
        case StageId::DifficultyCheck: return 3;
        case StageId::DesirableCheck: return 4;
        case StageId::UndesirableCheck: return 5;
        default: return 0;
    }
}

int failure_step(StageId stage) {
    if (stage == StageId::SolutionConsistencyCheck) return 1;
    return step_number(stage);
}

std::string to_string(StageId stage) {
    switch (stage) {
        case StageId::InitialGeneration: return "InitialGeneration";
        case StageId::QuantitativeCheck: return "QuantitativeCheck";
        case StageId::DifficultyCheck: return "DifficultyCheck";
        case StageId::DesirableCheck: return "DesirableCheck";
        case StageId::UndesirableCheck: return "UndesirableCheck";
        case StageId::SolutionConsistencyCheck: return "SolutionConsistencyCheck";
        case StageId::Regeneration: return "Regeneration";
    }
    throw UnknownStageError("invalid StageId value");
}

StageId stage_from_string(const std::string& name) {
    for (StageId stage : {StageId::InitialGeneration, StageId::QuantitativeCheck, StageId::DifficultyCheck,
                          StageId::DesirableCheck, StageId::UndesirableCheck, StageId::SolutionConsistencyCheck,
                          StageId::Regeneration}) {
        if (to_string(stage) == name) return stage;
    }
    throw UnknownStageError(name);
}

TemplateRegistry::TemplateRegistry() {
    templates_ = {
        make_template(StageId::InitialGeneration, kInitialGeneration, /*has_demonstration=*/true),
        make_template(StageId::QuantitativeCheck, kQuantitativeCheck),
        make_template(StageId::DifficultyCheck, kDifficultyCheck),
        make_template(StageId::DesirableCheck, kDesirableCheck),
        make_template(StageId::UndesirableCheck, kUndesirableCheck),
        make_template(StageId::SolutionConsistencyCheck, kSolutionConsistencyCheck),
        make_template(StageId::Regeneration, kRegeneration),
    };
}

const TemplateRegistry& TemplateRegistry::builtin() {
    static const TemplateRegistry registry;
    return registry;
}

void TemplateRegistry::apply_overrides(const std::string& directory) {
    for (auto& tmpl : templates_) {
        std::filesystem::path path = std::filesystem::path(directory) / (to_string(tmpl.stage) + ".txt");
        std::ifstream file(path, std::ios::binary);
        if (!file) continue;
        std::ostringstream content;
        content << file.rdbuf();
        tmpl.body = content.str();
        tmpl.slots = scan_slots(tmpl.body);
    }
}

const PromptTemplate& TemplateRegistry::get(StageId stage) const {
    for (const auto& tmpl : templates_) {
        if (tmpl.stage == stage) return tmpl;
    }
    throw UnknownStageError(to_string(stage));
}

RenderedPrompt TemplateRegistry::render(StageId stage, const SlotBindings& bindings,
                                        const std::string& source_id) const {
    const PromptTemplate& tmpl = get(stage);
    std::string text = tmpl.body;
    for (const auto& slot : tmpl.slots) {
        auto it = bindings.find(slot);
        if (it == bindings.end()) throw MissingSlotError(slot);
        text = replace_all(std::move(text), "{" + slot + "}", it->second);
    }
    return RenderedPrompt{stage, std::move(text), source_id};
}

RenderedPrompt TemplateRegistry::render_regeneration(StageId prior_stage, const std::string& original_q,
                                                     const std::string& revised_q, const std::string& explanation,
                                                     const std::string& source_id) const {
    switch (prior_stage) {
        case StageId::QuantitativeCheck:
        case StageId::DifficultyCheck:
        case StageId::DesirableCheck:
        case StageId::UndesirableCheck:
        case StageId::SolutionConsistencyCheck: break;
        default: throw UnknownStageError("regeneration must follow a judge stage, got " + to_string(prior_stage));
    }
    if (explanation.empty()) throw MissingSlotError("Explanation");

    // Failed-stage rubric (the "Rules:" block, when present) precedes the
    // regeneration instructions.
    std::string text;
    const std::string& prior_body = get(prior_stage).body;
    if (std::size_t rules = prior_body.find("Rules:"); rules != std::string::npos) {
        text = prior_body.substr(rules) + "\n\n";
    }
    text += get(StageId::Regeneration).body;
    text = replace_all(std::move(text), "{Original Question}", original_q);
    text = replace_all(std::move(text), "{Revised Question}", revised_q);
    text = replace_all(std::move(text), "{Explanation}", explanation);
    return RenderedPrompt{StageId::Regeneration, std::move(text), source_id};
}

const std::vector<PromptTemplate>& list_templates() { return TemplateRegistry::builtin().all(); }

RenderedPrompt render(StageId stage, const SlotBindings& bindings, const std::string& source_id) {
    return TemplateRegistry::builtin().render(stage, bindings, source_id);
}

RenderedPrompt render_regeneration(StageId prior_stage, const std::string& original_q, const std::string& revised_q,
                                   const std::string& explanation, const std::string& source_id) {
    return TemplateRegistry::builtin().render_regeneration(prior_stage, original_q, revised_q, explanation, source_id);
}

}  // namespace forge::prompts
