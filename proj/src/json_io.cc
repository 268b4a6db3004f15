#include "goalvar/json_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace goalvar {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &message) {
    throw ValidationError({{path, message}});
}

const Json &field(const Json &doc, const char *key, const std::string &path) {
    if (!doc.is_object())
        fail(path, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end())
        fail(path + "." + key, "missing field");
    return *it;
}

const Json *optional_field(const Json &doc, const char *key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null())
        return nullptr;
    return &*it;
}

std::string string_of(const Json &doc, const std::string &path) {
    if (!doc.is_string())
        fail(path, "expected a string");
    return doc.get<std::string>();
}

double number_of(const Json &doc, const std::string &path) {
    if (!doc.is_number())
        fail(path, "expected a number");
    return doc.get<double>();
}

bool bool_of(const Json &doc, const std::string &path) {
    if (!doc.is_boolean())
        fail(path, "expected true or false");
    return doc.get<bool>();
}

const Json &array_of(const Json &doc, const std::string &path) {
    if (!doc.is_array())
        fail(path, "expected an array");
    return doc;
}

std::string str(const Json &doc, const char *key, const std::string &path) {
    return string_of(field(doc, key, path), path + "." + key);
}

double num(const Json &doc, const char *key, const std::string &path) {
    return number_of(field(doc, key, path), path + "." + key);
}

bool flag(const Json &doc, const char *key, const std::string &path) {
    return bool_of(field(doc, key, path), path + "." + key);
}

std::string at(const std::string &path, std::size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

ValueKind kind_of(const Json &doc, const std::string &path) {
    auto kind = value_kind_from_string(string_of(doc, path));
    if (!kind)
        fail(path, "unknown value kind '" + doc.get<std::string>() + "'");
    return *kind;
}

// Infinite interval bounds travel as null.
Json bound(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

double bound_of(const Json &doc, const char *key, const std::string &path, double infinity) {
    const Json &v = field(doc, key, path);
    if (v.is_null())
        return infinity;
    return number_of(v, path + "." + key);
}

Json concept_variation_json(const ConceptVariation &cv) {
    return {{"type", "ConceptRangeVariation"}, {"concept", cv.base}, {"includeSubconcepts", cv.include_subconcepts}};
}

ConceptVariation concept_variation_of(const Json &doc, const std::string &path) {
    std::string type = str(doc, "type", path);
    if (type != "ConceptRangeVariation")
        fail(path + ".type", "expected ConceptRangeVariation, got '" + type + "'");
    ConceptVariation cv{str(doc, "concept", path), true};
    if (const Json *inc = optional_field(doc, "includeSubconcepts"))
        cv.include_subconcepts = bool_of(*inc, path + ".includeSubconcepts");
    return cv;
}

CollectionSubsetVariation subset_of(const Json &doc, const std::string &path) {
    std::string type = str(doc, "type", path);
    if (type != "MapRangeInstanceSubset")
        fail(path + ".type", "expected MapRangeInstanceSubset, got '" + type + "'");
    CollectionSubsetVariation out;
    const Json &elements = array_of(field(doc, "elements", path), path + ".elements");
    for (std::size_t i = 0; i < elements.size(); ++i)
        out.elements.push_back(variation_from_json(elements[i], at(path + ".elements", i)));
    return out;
}

std::vector<Variation> members_of(const Json &doc, const std::string &path) {
    std::vector<Variation> out;
    const Json &members = array_of(field(doc, "members", path), path + ".members");
    for (std::size_t i = 0; i < members.size(); ++i)
        out.push_back(variation_from_json(members[i], at(path + ".members", i)));
    return out;
}

Json parameters_json(const std::vector<ParameterDef> &params) {
    Json out = Json::array();
    for (const auto &p : params) {
        Json j{{"name", p.name}, {"kind", std::string(to_string(p.kind))}};
        if (p.concept_id)
            j["concept"] = *p.concept_id;
        if (p.unit)
            j["unit"] = *p.unit;
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<ParameterDef> parameters_of(const Json &doc, const std::string &path) {
    std::vector<ParameterDef> out;
    if (doc.is_null())
        return out;
    array_of(doc, path);
    for (std::size_t i = 0; i < doc.size(); ++i) {
        std::string p = at(path, i);
        ParameterDef def{str(doc[i], "name", p), kind_of(field(doc[i], "kind", p), p + ".kind"), {}, {}};
        if (const Json *c = optional_field(doc[i], "concept"))
            def.concept_id = string_of(*c, p + ".concept");
        if (const Json *u = optional_field(doc[i], "unit"))
            def.unit = string_of(*u, p + ".unit");
        out.push_back(std::move(def));
    }
    return out;
}

template <typename Parse>
auto parse_texts(const Json *doc, const std::string &path, Parse parse) {
    std::vector<decltype(parse(std::string()))> out;
    if (!doc)
        return out;
    array_of(*doc, path);
    for (std::size_t i = 0; i < doc->size(); ++i) {
        std::string text = string_of((*doc)[i], at(path, i));
        try {
            out.push_back(parse(text));
        } catch (const ParseError &e) {
            fail(at(path, i), e.what());
        }
    }
    return out;
}

Json texts(const std::vector<Condition> &conditions) {
    Json out = Json::array();
    for (const auto &c : conditions)
        out.push_back(c.text);
    return out;
}

}  // namespace

Json to_json(const Pose &pose) {
    return {{"position", pose.position}, {"orientation", pose.orientation}};
}

Pose pose_from_json(const Json &doc, const std::string &path) {
    Pose pose;
    const Json &position = array_of(field(doc, "position", path), path + ".position");
    if (position.size() != 3)
        fail(path + ".position", "expected 3 coordinates");
    for (std::size_t i = 0; i < 3; ++i)
        pose.position[i] = number_of(position[i], at(path + ".position", i));
    if (const Json *orientation = optional_field(doc, "orientation")) {
        array_of(*orientation, path + ".orientation");
        if (orientation->size() != 4)
            fail(path + ".orientation", "expected a quaternion [w, x, y, z]");
        for (std::size_t i = 0; i < 4; ++i)
            pose.orientation[i] = number_of((*orientation)[i], at(path + ".orientation", i));
    }
    return pose;
}

Json to_plain_json(const Value &value) {
    switch (value.kind()) {
    case ValueKind::Number:
        return value.as_number();
    case ValueKind::Integer:
        return value.as_integer();
    case ValueKind::Boolean:
        return value.as_boolean();
    case ValueKind::ConceptRef:
        return value.as_concept();
    case ValueKind::InstanceRef:
        return value.as_instance_ref();
    case ValueKind::Pose:
        return to_json(value.as_pose());
    case ValueKind::Location:
        return {{"reference", value.as_location().reference}, {"pose", to_json(value.as_location().delta)}};
    case ValueKind::Collection: {
        Json out = Json::object();
        for (const auto &[key, element] : value.as_collection().elements)
            out[key] = to_json(element);
        return out;
    }
    case ValueKind::Instance:
        return to_json(value.as_instance());
    case ValueKind::Environment:
        return to_json(value.as_environment());
    }
    return nullptr;
}

Value value_from_plain_json(const Json &doc, ValueKind domain, const std::string &path) {
    switch (domain) {
    case ValueKind::Number:
        return Value::number(number_of(doc, path));
    case ValueKind::Integer:
        if (!doc.is_number_integer())
            fail(path, "expected an integer");
        return Value::integer(doc.get<std::int64_t>());
    case ValueKind::Boolean:
        return Value::boolean(bool_of(doc, path));
    case ValueKind::ConceptRef:
        return Value::concept_ref(string_of(doc, path));
    case ValueKind::InstanceRef:
        return Value::instance_ref(string_of(doc, path));
    case ValueKind::Pose:
        return Value::pose(pose_from_json(doc, path));
    case ValueKind::Location:
        return Value::location(Location{str(doc, "reference", path), pose_from_json(field(doc, "pose", path), path + ".pose")});
    case ValueKind::Collection: {
        if (!doc.is_object())
            fail(path, "expected an object of tagged values");
        Collection c;
        for (const auto &[key, element] : doc.items())
            c.elements.emplace(key, value_from_json(element, path + "." + key));
        return Value::collection(std::move(c));
    }
    case ValueKind::Instance: {
        Instance instance{str(doc, "id", path), str(doc, "concept", path), {}};
        if (const Json *values = optional_field(doc, "values")) {
            if (!values->is_object())
                fail(path + ".values", "expected an object");
            for (const auto &[key, v] : values->items())
                instance.values.emplace(key, value_from_json(v, path + ".values." + key));
        }
        return Value::instance(std::move(instance));
    }
    case ValueKind::Environment:
        fail(path, "nested environments are not supported");
    }
    fail(path, "unsupported value kind");
}

Json to_json(const Value &value) {
    if (value.kind() == ValueKind::Instance) {
        const Instance &i = value.as_instance();
        Json values = Json::object();
        for (const auto &[k, v] : i.values)
            values[k] = to_json(v);
        return {{"kind", "Instance"}, {"value", {{"id", i.id}, {"concept", i.concept_id}, {"values", values}}}};
    }
    return {{"kind", std::string(to_string(value.kind()))}, {"value", to_plain_json(value)}};
}

Value value_from_json(const Json &doc, const std::string &path) {
    ValueKind kind = kind_of(field(doc, "kind", path), path + ".kind");
    return value_from_plain_json(field(doc, "value", path), kind, path + ".value");
}

Json to_json(const Ontology &ontology) {
    Json concepts = Json::array();
    for (const auto &id : ontology.concept_ids()) {
        const Concept &c = ontology.get_concept(id);
        Json props = Json::array();
        for (const auto &p : c.own_properties) {
            Json j{{"name", p.name}, {"domain", std::string(to_string(p.domain))}};
            if (p.unit)
                j["unit"] = *p.unit;
            if (p.default_value)
                j["default"] = to_plain_json(*p.default_value);
            props.push_back(std::move(j));
        }
        concepts.push_back({{"id", c.id}, {"parents", c.parents}, {"properties", props}});
    }
    return {{"concepts", concepts}};
}

Ontology ontology_from_json(const Json &doc) {
    Ontology ontology;
    const Json &concepts = array_of(field(doc, "concepts", "$"), "$.concepts");
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        std::string path = at("$.concepts", i);
        const Json &c = concepts[i];
        std::vector<std::string> parents;
        if (const Json *ps = optional_field(c, "parents")) {
            array_of(*ps, path + ".parents");
            for (std::size_t k = 0; k < ps->size(); ++k)
                parents.push_back(string_of((*ps)[k], at(path + ".parents", k)));
        }
        std::vector<PropertyDef> props;
        if (const Json *ps = optional_field(c, "properties")) {
            array_of(*ps, path + ".properties");
            for (std::size_t k = 0; k < ps->size(); ++k) {
                std::string p = at(path + ".properties", k);
                PropertyDef def{str((*ps)[k], "name", p), kind_of(field((*ps)[k], "domain", p), p + ".domain"), {}, {}};
                if (const Json *u = optional_field((*ps)[k], "unit"))
                    def.unit = string_of(*u, p + ".unit");
                if (const Json *d = optional_field((*ps)[k], "default"))
                    def.default_value = value_from_plain_json(*d, def.domain, p + ".default");
                props.push_back(std::move(def));
            }
        }
        try {
            ontology.define_concept(str(c, "id", path), std::move(parents), std::move(props));
        } catch (const ValidationError &) {
            throw;
        } catch (const Error &e) {
            throw ValidationError({{path, e.what()}});
        }
    }
    return ontology;
}

Json to_json(const Instance &instance) {
    Json values = Json::object();
    for (const auto &[k, v] : instance.values)
        values[k] = to_plain_json(v);
    return {{"id", instance.id}, {"concept", instance.concept_id}, {"values", values}};
}

Json to_json(const EnvironmentState &env) {
    Json instances = Json::array();
    for (const auto &[id, instance] : env.instances())
        instances.push_back(to_json(instance));
    return {{"instances", instances}};
}

EnvironmentState environment_from_json(const Ontology &ontology, const Json &doc, const std::string &path) {
    std::map<std::string, Instance> instances;
    const Json &list = array_of(field(doc, "instances", path), path + ".instances");
    for (std::size_t i = 0; i < list.size(); ++i) {
        std::string p = at(path + ".instances", i);
        Instance instance{str(list[i], "id", p), str(list[i], "concept", p), {}};
        if (!ontology.has_concept(instance.concept_id))
            fail(p + ".concept", "unknown concept '" + instance.concept_id + "'");
        if (const Json *values = optional_field(list[i], "values")) {
            if (!values->is_object())
                fail(p + ".values", "expected an object");
            for (const auto &[name, v] : values->items()) {
                const PropertyDef *def = ontology.find_property(instance.concept_id, name);
                if (!def)
                    fail(p + ".values." + name, "concept '" + instance.concept_id + "' has no property '" + name + "'");
                instance.values.emplace(name, value_from_plain_json(v, def->domain, p + ".values." + name));
            }
        }
        instance = complete_instance(ontology, std::move(instance));
        if (!instances.emplace(instance.id, instance).second)
            fail(p + ".id", "duplicate instance '" + instance.id + "'");
    }
    if (!instances.count("world") && ontology.has_concept("Frame"))
        instances.emplace("world", Instance{"world", "Frame", {}});
    EnvironmentState env(std::move(instances));
    validate_environment(ontology, env);
    return env;
}

Json to_json(const Variation &variation) {
    return std::visit(
        [&](const auto &node) -> Json {
            using T = std::decay_t<decltype(node)>;
            Json out{{"type", std::string(type_name(variation))}};
            if constexpr (std::is_same_v<T, FixedVariation>) {
                out["value"] = to_json(node.value);
            } else if constexpr (std::is_same_v<T, IntervalVariation>) {
                out["lower"] = bound(node.lower);
                out["lowerClosed"] = node.lower_closed;
                out["upper"] = bound(node.upper);
                out["upperClosed"] = node.upper_closed;
            } else if constexpr (std::is_same_v<T, UnionVariation> || std::is_same_v<T, IntersectionVariation>) {
                Json members = Json::array();
                for (const auto &m : node.members)
                    members.push_back(to_json(m));
                out["members"] = members;
            } else if constexpr (std::is_same_v<T, ConceptVariation>) {
                out = concept_variation_json(node);
            } else if constexpr (std::is_same_v<T, BallVariation>) {
                if (node.reference)
                    out["reference"] = *node.reference;
                out["center"] = to_json(node.center);
                out["maxDistance"] = node.max_distance;
                out["maxAngle"] = node.max_angle;
            } else if constexpr (std::is_same_v<T, InstancePropertiesVariation>) {
                out["concept"] = concept_variation_json(node.concept_variation);
                Json props = Json::object();
                for (const auto &[name, v] : node.properties)
                    props[name] = to_json(v);
                out["properties"] = props;
            } else if constexpr (std::is_same_v<T, CollectionSubsetVariation>) {
                Json elements = Json::array();
                for (const auto &e : node.elements)
                    elements.push_back(to_json(e));
                out["elements"] = elements;
            } else if constexpr (std::is_same_v<T, EnvironmentVariation>) {
                out["entities"] = to_json(Variation(node.entities));
            }
            return out;
        },
        variation.node());
}

Variation variation_from_json(const Json &doc, const std::string &path) {
    const double inf = std::numeric_limits<double>::infinity();
    std::string type = str(doc, "type", path);
    if (type == "Empty")
        return Variation::empty();
    if (type == "Whole")
        return Variation::whole();
    if (type == "Fixed")
        return Variation::fixed(value_from_json(field(doc, "value", path), path + ".value"));
    if (type == "Interval")
        return Variation::interval(bound_of(doc, "lower", path, -inf), flag(doc, "lowerClosed", path),
                                   bound_of(doc, "upper", path, inf), flag(doc, "upperClosed", path));
    if (type == "Union")
        return Variation::any_of(members_of(doc, path));
    if (type == "Intersection")
        return Variation::all_of(members_of(doc, path));
    if (type == "ConceptRangeVariation")
        return concept_variation_of(doc, path);
    if (type == "BallInterval") {
        BallVariation ball;
        if (const Json *r = optional_field(doc, "reference"))
            ball.reference = string_of(*r, path + ".reference");
        ball.center = pose_from_json(field(doc, "center", path), path + ".center");
        ball.max_distance = num(doc, "maxDistance", path);
        ball.max_angle = num(doc, "maxAngle", path);
        return ball;
    }
    if (type == "InstanceRangePropertiesVariation") {
        InstancePropertiesVariation ipv;
        ipv.concept_variation = concept_variation_of(field(doc, "concept", path), path + ".concept");
        if (const Json *props = optional_field(doc, "properties")) {
            if (!props->is_object())
                fail(path + ".properties", "expected an object");
            for (const auto &[name, v] : props->items())
                ipv.properties.emplace(name, variation_from_json(v, path + ".properties." + name));
        }
        return ipv;
    }
    if (type == "MapRangeInstanceSubset")
        return subset_of(doc, path);
    if (type == "EnvironmentDataRangeEntityVariation")
        return EnvironmentVariation{subset_of(field(doc, "entities", path), path + ".entities")};
    fail(path + ".type", "unknown variation type '" + type + "'");
}

Json to_json(const Predicate &p) {
    Json args = Json::array();
    for (const auto &a : p.arguments)
        args.push_back(to_json(a));
    return {{"function", p.function}, {"arguments", args}, {"expected", p.expected}, {"actual", p.actual}};
}

Json to_json(const Reason &r) {
    return {{"kind", std::string(to_string(r.kind))}, {"predicate", to_json(r.detail)}};
}

Json to_json(const Comparison &c) {
    Json reasons = Json::array();
    for (const auto &r : c.reasons)
        reasons.push_back(to_json(r));
    Json subs = Json::array();
    for (const auto &s : c.sub_comparisons)
        subs.push_back(to_json(s));
    Json target = c.targets_variation() ? Json{{"variation", to_json(std::get<Variation>(c.target))}}
                                        : Json{{"value", to_json(std::get<Value>(c.target))}};
    return {{"type", "Comparison"}, {"label", c.label},           {"value", to_json(c.value)},
            {"target", target},     {"equal", c.equal},           {"reasons", reasons},
            {"subComparisons", subs}};
}

Json to_json(const PropertyDifference &d) {
    return {{"instance", d.instance},
            {"concept", d.concept_id},
            {"property", d.property},
            {"current", to_json(d.current)},
            {"target", to_json(d.target)},
            {"comparison", to_json(d.comparison)}};
}

Json to_json(const MatchResult &m) {
    Json assignment = Json::object();
    for (const auto &[index, id] : m.assignment)
        assignment[std::to_string(index)] = id;
    Json witness = Json::object();
    for (const auto &[index, cmps] : m.failure_witness) {
        Json list = Json::array();
        for (const auto &c : cmps)
            list.push_back(to_json(c));
        witness[std::to_string(index)] = list;
    }
    return {{"satisfied", m.satisfied}, {"assignment", assignment}, {"failureWitness", witness}};
}

Json to_json(const EnvironmentComparison &ec) {
    Json elements = Json::array();
    for (const auto &e : ec.elements) {
        Json candidates = Json::array();
        for (const auto &c : e.candidates) {
            Json diffs = Json::array();
            for (const auto &d : c.differences)
                diffs.push_back(to_json(d));
            candidates.push_back({{"instance", c.instance}, {"member", c.member}, {"differences", diffs}});
        }
        elements.push_back({{"index", e.index},
                            {"candidates", candidates},
                            {"missing", e.missing ? to_json(*e.missing) : Json(nullptr)}});
    }
    return {{"elements", elements}, {"match", to_json(ec.match)}};
}

Json to_json(const SkillRegistry &registry) {
    Json actions = Json::array();
    for (const auto &a : registry.actions()) {
        Json affects = Json::array();
        for (const auto &p : a.affected_properties)
            affects.push_back({{"concept", p.concept_id}, {"property", p.property}});
        actions.push_back({{"id", a.id}, {"affects", affects}, {"parameters", parameters_json(a.parameters)}});
    }
    Json skills = Json::array();
    for (const auto &s : registry.skills()) {
        Json effects = Json::array();
        for (const auto &e : s.effects)
            effects.push_back(e.text);
        Json j{{"id", s.id},
               {"implements", s.implements},
               {"parameters", parameters_json(s.parameters)},
               {"preconditions", texts(s.preconditions)},
               {"effects", effects},
               {"checks", texts(s.checks)}};
        if (s.duration)
            j["duration"] = s.duration_text;
        skills.push_back(std::move(j));
    }
    return {{"actions", actions}, {"skills", skills}};
}

SkillRegistry registry_from_json(const Ontology &ontology, const Json &doc) {
    SkillRegistry registry;
    if (const Json *actions = optional_field(doc, "actions")) {
        array_of(*actions, "$.actions");
        for (std::size_t i = 0; i < actions->size(); ++i) {
            std::string path = at("$.actions", i);
            const Json &a = (*actions)[i];
            ActionTemplate action{str(a, "id", path), {}, parameters_of(a.value("parameters", Json()), path + ".parameters")};
            const Json &affects = array_of(field(a, "affects", path), path + ".affects");
            for (std::size_t k = 0; k < affects.size(); ++k)
                action.affected_properties.push_back(
                    {str(affects[k], "concept", at(path + ".affects", k)), str(affects[k], "property", at(path + ".affects", k))});
            registry.add_action(ontology, std::move(action));
        }
    }
    if (const Json *skills = optional_field(doc, "skills")) {
        array_of(*skills, "$.skills");
        for (std::size_t i = 0; i < skills->size(); ++i) {
            std::string path = at("$.skills", i);
            const Json &s = (*skills)[i];
            SkillTemplate skill;
            skill.id = str(s, "id", path);
            if (const Json *impl = optional_field(s, "implements")) {
                array_of(*impl, path + ".implements");
                for (std::size_t k = 0; k < impl->size(); ++k)
                    skill.implements.push_back(string_of((*impl)[k], at(path + ".implements", k)));
            }
            skill.parameters = parameters_of(s.value("parameters", Json()), path + ".parameters");
            skill.preconditions = parse_texts(optional_field(s, "preconditions"), path + ".preconditions", parse_condition);
            skill.effects = parse_texts(optional_field(s, "effects"), path + ".effects", parse_effect);
            skill.checks = parse_texts(optional_field(s, "checks"), path + ".checks", parse_condition);
            if (const Json *d = optional_field(s, "duration")) {
                std::string text = d->is_number() ? d->dump() : string_of(*d, path + ".duration");
                try {
                    skill.duration = parse_expression(text);
                } catch (const ParseError &e) {
                    fail(path + ".duration", e.what());
                }
                skill.duration_text = text;
            }
            registry.add_skill(ontology, std::move(skill));
        }
    }
    return registry;
}

Json to_json(const SkillInstance &skill) {
    Json bindings = Json::object();
    for (const auto &[name, v] : skill.bindings)
        bindings[name] = to_plain_json(v);
    return {{"skill", skill.skill}, {"bindings", bindings}, {"duration", skill.duration}};
}

SkillInstance skill_instance_from_json(const Model &model, const Json &doc, const std::string &path) {
    std::string id = str(doc, "skill", path);
    const SkillTemplate *t = model.skills.find_skill(id);
    if (!t)
        fail(path + ".skill", "unknown skill '" + id + "'");
    const Json &bindings = field(doc, "bindings", path);
    if (!bindings.is_object())
        fail(path + ".bindings", "expected an object");
    std::map<std::string, Value> values;
    for (const auto &[name, v] : bindings.items()) {
        const ParameterDef *p = t->find_parameter(name);
        if (!p)
            fail(path + ".bindings." + name, "skill '" + id + "' has no parameter '" + name + "'");
        values.emplace(name, value_from_plain_json(v, p->kind, path + ".bindings." + name));
    }
    try {
        return model.skills.instantiate(id, std::move(values));
    } catch (const ValidationError &e) {
        fail(path + ".bindings", e.what());
    }
}

Json to_json(const Recognition &r) {
    Json skills = Json::array();
    for (const auto &s : r.skills)
        skills.push_back({{"from", s.from}, {"to", s.to}, {"skill", to_json(s.skill)}});
    Json residuals = Json::array();
    for (const auto &c : r.residuals)
        residuals.push_back({{"from", c.from}, {"to", c.to}, {"difference", to_json(c.difference)}});
    return {{"skills", skills}, {"residuals", residuals}};
}

Json to_json(const DemonstrationDiff &diff) {
    Json changed = Json::array();
    for (const auto &e : diff.changed) {
        Json changes = Json::array();
        for (const auto &c : e.changes)
            changes.push_back({{"property", c.property}, {"before", to_json(c.before)}, {"after", to_json(c.after)}});
        changed.push_back({{"instance", e.id}, {"concept", e.concept_id}, {"changes", changes}});
    }
    return {{"changed", changed}, {"recognized", to_json(diff.recognized)}};
}

Json to_json(const ExecutionPlan &plan) {
    Json steps = Json::array();
    for (const auto &step : plan.steps) {
        Json alternatives = Json::array();
        for (const auto &alt : step.alternatives)
            alternatives.push_back({{"skill", to_json(alt.skill)},
                                    {"preconditionPlan", alt.precondition_plan ? to_json(*alt.precondition_plan) : Json(nullptr)}});
        steps.push_back({{"alternatives", alternatives}});
    }
    return {{"steps", steps}, {"stepCount", plan.step_count()}};
}

ExecutionPlan plan_from_json(const Model &model, const Json &doc, const std::string &path) {
    ExecutionPlan plan;
    const Json &steps = array_of(field(doc, "steps", path), path + ".steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        std::string sp = at(path + ".steps", i);
        SkillAlternativeSet set;
        const Json &alts = array_of(field(steps[i], "alternatives", sp), sp + ".alternatives");
        if (alts.empty())
            fail(sp + ".alternatives", "a step needs at least one alternative");
        for (std::size_t k = 0; k < alts.size(); ++k) {
            std::string ap = at(sp + ".alternatives", k);
            SkillAlternative alt{skill_instance_from_json(model, field(alts[k], "skill", ap), ap + ".skill"), nullptr};
            if (const Json *nested = optional_field(alts[k], "preconditionPlan"))
                alt.precondition_plan =
                    std::make_shared<const ExecutionPlan>(plan_from_json(model, *nested, ap + ".preconditionPlan"));
            set.alternatives.push_back(std::move(alt));
        }
        plan.steps.push_back(std::move(set));
    }
    return plan;
}

Json to_json(const SolutionMatrix &matrix) {
    Json cells = Json::array();
    for (const auto &cell : matrix.cells) {
        Json diffs = Json::array();
        for (const auto &d : cell.differences)
            diffs.push_back(to_json(d));
        auto cost = cell.cost();
        cells.push_back({{"row", cell.row},
                         {"candidate", cell.candidate},
                         {"status", std::string(to_string(cell.status))},
                         {"cost", cost ? Json(*cost) : Json(nullptr)},
                         {"plan", to_json(cell.plan)},
                         {"note", cell.note},
                         {"differences", diffs}});
    }
    return {{"rows", matrix.rows}, {"columns", matrix.columns}, {"cells", cells}};
}

Json to_json(const PlanResult &result) {
    Json assignment = Json::object();
    for (const auto &[index, id] : result.assignment)
        assignment[std::to_string(index)] = id;
    return {{"satisfiable", result.satisfiable},
            {"assignment", assignment},
            {"totalCost", result.total_cost},
            {"plan", to_json(result.plan)},
            {"matrix", to_json(result.matrix)}};
}

Json to_json(const ExecutionTrace &trace) {
    Json entries = Json::array();
    for (const auto &e : trace.entries)
        entries.push_back({{"skill", to_json(e.skill)},
                           {"preDigest", e.pre_digest},
                           {"postDigest", e.post_digest},
                           {"duration", e.duration},
                           {"preconditionsPassed", e.preconditions_passed}});
    Json failures = Json::array();
    for (const auto &c : trace.failures)
        failures.push_back(to_json(c));
    return {{"entries", entries},
            {"finalEnvironment", to_json(trace.final_env)},
            {"verdict", std::string(to_string(trace.verdict))},
            {"aborted", trace.aborted},
            {"failedSkill", trace.failed_skill ? to_json(*trace.failed_skill) : Json(nullptr)},
            {"failures", failures},
            {"goalComparison", trace.goal_comparison ? to_json(*trace.goal_comparison) : Json(nullptr)},
            {"totalDuration", trace.total_duration}};
}

Json to_json(const Answer &answer) {
    return std::visit([](const auto &v) { return Json(v); }, answer);
}

Answer answer_from_json(const Json &doc, const std::string &path) {
    if (doc.is_boolean())
        return doc.get<bool>();
    if (doc.is_number())
        return doc.get<double>();
    if (doc.is_string())
        return doc.get<std::string>();
    if (doc.is_array()) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < doc.size(); ++i)
            out.push_back(string_of(doc[i], at(path, i)));
        return out;
    }
    fail(path, "an answer is a list of option ids, an option id, a number or a boolean");
}

Json to_json(const Question &q) {
    Json options = Json::array();
    for (const auto &o : q.options)
        options.push_back({{"id", o.id}, {"label", o.label}});
    return {{"id", q.id},
            {"kind", std::string(to_string(q.kind))},
            {"answerType", std::string(to_string(q.answer_type))},
            {"entity", q.entity},
            {"property", q.property},
            {"variationKind", q.variation_kind},
            {"parameter", q.parameter},
            {"text", q.text},
            {"options", options},
            {"default", to_json(q.default_answer)}};
}

Json to_json(const Session &s) {
    return {{"id", s.id()},
            {"version", s.version()},
            {"complete", s.complete()},
            {"questionsAsked", s.questions_asked()},
            {"bound", s.bound()},
            {"question", s.pending() ? to_json(*s.pending()) : Json(nullptr)},
            {"variation", s.result() ? to_json(*s.result()) : Json(nullptr)},
            {"diff", to_json(s.diff())}};
}

Json transcript_to_json(const Session &s) {
    Json entries = Json::array();
    for (const auto &e : s.transcript())
        entries.push_back({{"question", to_json(e.question)}, {"answer", to_json(e.answer)}});
    return {{"session", s.id()},
            {"entries", entries},
            {"complete", s.complete()},
            {"variation", s.result() ? to_json(*s.result()) : Json(nullptr)}};
}

std::map<std::string, Answer> answer_script_from_json(const Json &doc) {
    std::map<std::string, Answer> out;
    if (doc.is_object()) {
        for (const auto &[id, a] : doc.items())
            out.emplace(id, answer_from_json(a, "$." + id));
        return out;
    }
    array_of(doc, "$");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        std::string path = at("$", i);
        std::string id = str(doc[i], "question", path);
        if (!out.emplace(id, answer_from_json(field(doc[i], "answer", path), path + ".answer")).second)
            fail(path + ".question", "question '" + id + "' answered twice");
    }
    return out;
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        fail("$", std::string("malformed document: ") + e.what());
    }
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("io_error", "cannot read '" + path + "'", path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_json(text.str());
    } catch (const ValidationError &e) {
        throw Error("parse_error", path + ": " + e.what(), path);
    }
}

void write_json_file(const std::string &path, const Json &doc) {
    std::ofstream out(path);
    if (!out)
        throw Error("io_error", "cannot write '" + path + "'", path);
    out << dump(doc);
}

std::string dump(const Json &doc) {
    return doc.dump(2) + "\n";
}

}  // namespace goalvar
