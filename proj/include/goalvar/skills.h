#ifndef GOALVAR_SKILLS_H
#define GOALVAR_SKILLS_H

#include "goalvar/comparison.h"
#include "goalvar/expression.h"
#include "goalvar/kb.h"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace goalvar {

// Amounts recovered by recognition must agree within this many liters.
inline constexpr double kMatchTolerance = 1e-6;

struct ParameterDef {
    std::string name;
    ValueKind kind = ValueKind::Number;
    // For InstanceRef parameters: the bound instance must be of this concept.
    std::optional<std::string> concept_id;
    std::optional<std::string> unit;
};

struct AffectedProperty {
    std::string concept_id;
    std::string property;
};

// Abstract change, described only by the properties it modifies.
struct ActionTemplate {
    std::string id;
    std::vector<AffectedProperty> affected_properties;
    std::vector<ParameterDef> parameters;
};

// Executable enactment of one or more actions.
struct SkillTemplate {
    std::string id;
    std::vector<std::string> implements;
    std::vector<ParameterDef> parameters;
    std::vector<Condition> preconditions;
    std::vector<Effect> effects;
    // Observable predicates over a snapshot pair, used for recognition.
    std::vector<Condition> checks;
    // Seconds, from the bound parameters; none means zero.
    std::string duration_text;
    ExprPtr duration;

    const ParameterDef *find_parameter(const std::string &name) const;
};

struct SkillInstance {
    std::string skill;
    std::map<std::string, Value> bindings;
    double duration = 0.0;  // seconds
};

class SkillRegistry {
public:
    // Both throw ValidationError when the template does not fit the ontology.
    void add_action(const Ontology &ontology, ActionTemplate action);
    void add_skill(const Ontology &ontology, SkillTemplate skill);

    const ActionTemplate *find_action(const std::string &id) const;
    const SkillTemplate *find_skill(const std::string &id) const;
    // Throws UnknownSkillError.
    const SkillTemplate &skill(const std::string &id) const;

    // Registration order.
    const std::vector<ActionTemplate> &actions() const { return actions_; }
    const std::vector<SkillTemplate> &skills() const { return skills_; }

    std::vector<const SkillTemplate *> skills_implementing(const std::string &action_id) const;

    // Checks the bindings against the parameter schema and derives the
    // duration. Throws UnknownSkillError or ValidationError.
    SkillInstance instantiate(const std::string &skill_id, std::map<std::string, Value> bindings) const;

private:
    std::vector<ActionTemplate> actions_;
    std::vector<SkillTemplate> skills_;
};

// Registered actions whose affected properties include `property` on
// `concept_id` or one of its ancestors.
std::vector<const ActionTemplate *> actions_for_property(const Ontology &ontology,
                                                         const SkillRegistry &registry,
                                                         const std::string &concept_id,
                                                         const std::string &property);

// One Comparison per failing precondition; empty means executable now.
// Throws UnknownInstanceError when a binding does not resolve.
// A bound instance outside its parameter's concept also fails.
std::vector<Comparison> check_preconditions(const Ontology &ontology, const SkillRegistry &registry,
                                            const SkillInstance &skill, const EnvironmentState &env);

// Throws PreconditionViolatedError when a precondition fails.
EnvironmentState apply_effects(const Ontology &ontology, const SkillRegistry &registry,
                               const SkillInstance &skill, const EnvironmentState &env);

struct RecognizedSkill {
    std::size_t from = 0;  // snapshot indices
    std::size_t to = 0;
    SkillInstance skill;
};

struct ResidualChange {
    std::size_t from = 0;
    std::size_t to = 0;
    PropertyDifference difference;
};

struct Recognition {
    std::vector<RecognizedSkill> skills;
    // Changes no recognized skill accounts for.
    std::vector<ResidualChange> residuals;
};

// Evaluates every skill's checks on each consecutive snapshot pair. Numeric
// parameters are solved from the checks; when several instances compete for
// the same change, the one explaining more changes wins.
Recognition recognize_skills(const Ontology &ontology, const SkillRegistry &registry,
                             const std::vector<EnvironmentState> &snapshots);

}  // namespace goalvar

#endif
