#ifndef GOALVAR_JSON_IO_H
#define GOALVAR_JSON_IO_H

#include "goalvar/executor.h"
#include "goalvar/goal_session.h"
#include "goalvar/planner.h"

#include <json.hpp>

#include <map>
#include <string>

// Interchange documents. Every writer is deterministic: object keys are
// sorted and instances appear in id order, so equal inputs serialize to
// byte-identical text. Readers throw ValidationError naming the offending
// path ("$.instances[1].values.contentLevel").

namespace goalvar {

using Json = nlohmann::json;

// Tagged form: {"kind": "Number", "value": 0.3}.
Json to_json(const Value &value);
Value value_from_json(const Json &doc, const std::string &path = "$");

// Untagged form, decoded through the property domain: 0.3, "White", ...
Json to_plain_json(const Value &value);
Value value_from_plain_json(const Json &doc, ValueKind domain, const std::string &path = "$");

Json to_json(const Pose &pose);
Pose pose_from_json(const Json &doc, const std::string &path = "$");

Json to_json(const Ontology &ontology);
Ontology ontology_from_json(const Json &doc);

Json to_json(const Instance &instance);
Json to_json(const EnvironmentState &env);
// Fills ontology defaults, adds the `world` frame that default locations
// refer to when the document lacks one, and validates the result.
EnvironmentState environment_from_json(const Ontology &ontology, const Json &doc,
                                       const std::string &path = "$");

Json to_json(const Variation &variation);
Variation variation_from_json(const Json &doc, const std::string &path = "$");

Json to_json(const Predicate &predicate);
Json to_json(const Reason &reason);
Json to_json(const Comparison &comparison);
Json to_json(const PropertyDifference &difference);
Json to_json(const MatchResult &match);
Json to_json(const EnvironmentComparison &comparison);

Json to_json(const SkillRegistry &registry);
SkillRegistry registry_from_json(const Ontology &ontology, const Json &doc);

// Bindings are untagged and decoded through the skill's parameter schema.
Json to_json(const SkillInstance &skill);
SkillInstance skill_instance_from_json(const Model &model, const Json &doc, const std::string &path = "$");

Json to_json(const Recognition &recognition);
Json to_json(const DemonstrationDiff &diff);

Json to_json(const ExecutionPlan &plan);
ExecutionPlan plan_from_json(const Model &model, const Json &doc, const std::string &path = "$");
Json to_json(const SolutionMatrix &matrix);
Json to_json(const PlanResult &result);

Json to_json(const ExecutionTrace &trace);

Json to_json(const Answer &answer);
Answer answer_from_json(const Json &doc, const std::string &path = "$");
Json to_json(const Question &question);
Json to_json(const Session &session);
Json transcript_to_json(const Session &session);

// Either [{"question": id, "answer": ...}, ...] or {id: answer, ...}.
std::map<std::string, Answer> answer_script_from_json(const Json &doc);

Model model_from_json(const Json &ontology, const Json &registry);
// The documents behind default_model().
const Json &default_ontology_document();
const Json &default_registry_document();

// Parses text; syntax errors become ValidationError at "$".
Json parse_json(const std::string &text);
Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &doc);

// Canonical text: two-space indentation and a trailing newline.
std::string dump(const Json &doc);

}  // namespace goalvar

#endif
