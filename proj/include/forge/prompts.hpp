#pragma once

#include <map>
#include <string>
#include <vector>

namespace forge::prompts {

/// Pipeline stages. The five primary stages are ordered 1..5; the two
/// auxiliary stages (solution-consistency judge, regeneration) carry no
/// step number.
enum class StageId {
    InitialGeneration,
    QuantitativeCheck,
    DifficultyCheck,
    DesirableCheck,
    UndesirableCheck,
    SolutionConsistencyCheck,
    Regeneration,
};

/// 1..5 for the primary stages, 0 for auxiliary ones.
int step_number(StageId stage);

/// Step the stage's failures are attributed to in the failure taxonomy.
/// Solution-consistency failures count as step-1 (generation) failures.
int failure_step(StageId stage);

std::string to_string(StageId stage);
StageId stage_from_string(const std::string& name);

struct PromptTemplate {
    StageId stage;
    std::string body;                 // slot markers look like {Slot Name}
    std::vector<std::string> slots;   // slot names the body declares
    bool has_demonstration = false;   // embedded few-shot example
};

struct RenderedPrompt {
    StageId stage;
    std::string text;
    std::string source_id;
};

using SlotBindings = std::map<std::string, std::string>;

/// The compiled template set, optionally overridden from a directory of
/// <stage>.txt files for experimentation.
class TemplateRegistry {
public:
    static const TemplateRegistry& builtin();

    TemplateRegistry();

    /// Replaces the bodies of any stage that has an override file
    /// ("<stage>.txt", e.g. "QuantitativeCheck.txt") in the directory.
    void apply_overrides(const std::string& directory);

    const PromptTemplate& get(StageId stage) const;
    const std::vector<PromptTemplate>& all() const { return templates_; }

    /// Byte-exact substitution of every declared slot. Bindings must cover
    /// all declared slots (empty values are allowed); throws MissingSlotError.
    RenderedPrompt render(StageId stage, const SlotBindings& bindings,
                          const std::string& source_id = "") const;

    /// Regeneration prompt: the failed stage's "Rules:" block (when the
    /// stage has one) followed by the regeneration instruction block with
    /// the judge's explanation substituted.
    RenderedPrompt render_regeneration(StageId prior_stage, const std::string& original_q,
                                       const std::string& revised_q, const std::string& explanation,
                                       const std::string& source_id = "") const;

private:
    std::vector<PromptTemplate> templates_;
};

/// All templates of the builtin registry, in stage order.
const std::vector<PromptTemplate>& list_templates();

/// Convenience wrappers over the builtin registry.
RenderedPrompt render(StageId stage, const SlotBindings& bindings, const std::string& source_id = "");
RenderedPrompt render_regeneration(StageId prior_stage, const std::string& original_q,
                                   const std::string& revised_q, const std::string& explanation,
                                   const std::string& source_id = "");

}  // namespace forge::prompts
