#ifndef GOALVAR_GOAL_SESSION_H
#define GOALVAR_GOAL_SESSION_H

#include "goalvar/model.h"
#include "goalvar/variation.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace goalvar {

// Pseudo-property naming an entity's concept in question ids.
inline constexpr const char *kConceptProperty = "#concept";

struct PropertyChange {
    std::string property;
    Value before;
    Value after;
};

struct ChangedEntity {
    std::string id;
    std::string concept_id;
    std::vector<PropertyChange> changes;  // property order
};

struct DemonstrationDiff {
    std::vector<ChangedEntity> changed;  // instance id order
    Recognition recognized;
};

// Instances present in both snapshots whose values differ.
DemonstrationDiff diff_demonstration(const Model &model, const EnvironmentState &before,
                                     const EnvironmentState &after);

enum class QuestionKind {
    SelectRelevantEntities,
    SelectRelevantProperties,
    SelectVariationKind,
    ProvideParameters,
    GeneralizeConcept,
};

std::string_view to_string(QuestionKind kind);

enum class AnswerType { MultiSelect, SingleSelect, Number, Boolean, Text };

std::string_view to_string(AnswerType type);

using Answer = std::variant<std::vector<std::string>, std::string, double, bool>;

struct Option {
    std::string id;
    std::string label;
};

struct Question {
    std::string id;
    QuestionKind kind = QuestionKind::SelectRelevantEntities;
    AnswerType answer_type = AnswerType::MultiSelect;
    std::string entity;
    std::string property;
    std::string variation_kind;
    std::string parameter;
    std::string text;
    // Selectable choices; for free-form answers a single option describes the
    // expected input.
    std::vector<Option> options;
    Answer default_answer;
};

struct ParameterSpec {
    std::string name;
    AnswerType type = AnswerType::Number;
    std::string label;
};

struct VariationKindSpec {
    std::string id;
    std::string label;
    std::vector<ParameterSpec> parameters;
};

// Variation kinds offered for a property domain, in presentation order.
const std::vector<VariationKindSpec> &variation_kinds(ValueKind domain);
// Kinds offered for an entity's concept.
const std::vector<VariationKindSpec> &concept_variation_kinds();

// Largest parameter count among the kinds offered for `domain`.
std::size_t max_parameters(ValueKind domain);

// Worst-case length of the question schedule for `diff`.
std::size_t question_bound(const Model &model, const DemonstrationDiff &diff);

struct TranscriptEntry {
    Question question;
    Answer answer;
};

// Serial question/answer state machine. Sessions are values: answering
// returns the successor and leaves the receiver untouched.
class Session {
public:
    // Throws NoChangesDetectedError when the snapshots do not differ.
    static Session start(const Model &model, std::string id, EnvironmentState before,
                         EnvironmentState after);

    // Throws InvalidAnswerError (this session stays as it was) or Error when
    // the session is already complete.
    Session answer(const Model &model, const Answer &answer) const;

    const std::string &id() const { return id_; }
    std::uint64_t version() const { return version_; }
    const EnvironmentState &before() const { return before_; }
    const EnvironmentState &after() const { return after_; }
    const DemonstrationDiff &diff() const { return diff_; }
    std::size_t bound() const { return bound_; }
    std::size_t questions_asked() const { return transcript_.size() + (pending_ ? 1 : 0); }
    const std::vector<TranscriptEntry> &transcript() const { return transcript_; }

    bool complete() const { return result_.has_value(); }
    const std::optional<Question> &pending() const { return pending_; }
    const std::optional<Variation> &result() const { return result_; }

private:
    struct PropertyChoice {
        std::string property;
        std::string kind;
        std::map<std::string, Answer> parameters;
    };
    struct EntityChoice {
        std::size_t index = 0;  // into diff_.changed
        std::vector<PropertyChoice> properties;
        std::string concept_kind;
        std::string concept_base;
        bool include_subconcepts = true;
    };

    enum class Stage { Entities, Properties, Kind, Parameter, ConceptKind, ConceptBase, ConceptInclude, Done };

    Question make_question(const Model &model) const;
    void apply(const Model &model, const Answer &answer);
    void advance(const Model &model);
    Variation property_variation(const Model &model, const ChangedEntity &entity,
                                 const PropertyChoice &choice) const;
    Variation assemble(const Model &model) const;
    const PropertyChange &change_of(const ChangedEntity &entity, const std::string &property) const;
    const VariationKindSpec &kind_spec(const Model &model, const ChangedEntity &entity,
                                       const PropertyChoice &choice) const;
    std::string general_base(const Model &model, const EntityChoice &choice) const;
    std::vector<std::string> base_options(const Model &model, const EntityChoice &choice) const;

    std::string id_;
    std::uint64_t version_ = 0;
    EnvironmentState before_;
    EnvironmentState after_;
    DemonstrationDiff diff_;
    std::size_t bound_ = 0;

    Stage stage_ = Stage::Entities;
    std::vector<EntityChoice> entities_;
    std::size_t entity_ = 0;
    std::size_t property_ = 0;
    std::size_t parameter_ = 0;

    std::vector<TranscriptEntry> transcript_;
    std::optional<Question> pending_;
    std::optional<Variation> result_;
};

// Headless driver: answers pending questions from `script` (question id ->
// answer) until the session completes. Questions missing from the script
// take their default when `use_defaults`, otherwise InvalidAnswerError.
Session run_script(const Model &model, Session session, const std::map<std::string, Answer> &script,
                   bool use_defaults = false);

}  // namespace goalvar

#endif
