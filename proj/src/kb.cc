#include "goalvar/kb.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace goalvar {

const Concept &Ontology::define_concept(std::string id, std::vector<std::string> parents,
                                        std::vector<PropertyDef> own_properties) {
    if (std::find(parents.begin(), parents.end(), id) != parents.end())
        throw CycleError("concept '" + id + "' lists itself as a parent", id);
    if (has_concept(id))
        throw DuplicateConceptError("concept '" + id + "' is already defined", id);
    for (const auto &parent : parents)
        if (!has_concept(parent))
            throw UnknownParentError("concept '" + id + "' names unknown parent '" + parent + "'",
                                     id);

    Entry e;
    // Diamonds are fine: a property reached twice from the same defining
    // concept is the same property.
    auto add = [&](const PropertyDef &prop, const std::string &origin) {
        for (std::size_t i = 0; i < e.resolved.size(); ++i) {
            if (e.resolved[i].name != prop.name)
                continue;
            if (e.origins[i] == origin)
                return;
            throw DuplicatePropertyError("property '" + prop.name + "' of concept '" + id +
                                             "' collides with the one defined by '" + e.origins[i] +
                                             "'",
                                         id + "." + prop.name);
        }
        e.resolved.push_back(prop);
        e.origins.push_back(origin);
    };
    for (const auto &parent : parents) {
        const Entry &p = entries_.at(parent);
        for (std::size_t i = 0; i < p.resolved.size(); ++i)
            add(p.resolved[i], p.origins[i]);
    }
    for (const auto &prop : own_properties) {
        if (prop.domain == ValueKind::Instance || prop.domain == ValueKind::Environment)
            throw DomainMismatchError("property '" + prop.name + "' cannot have domain " +
                                          std::string(to_string(prop.domain)),
                                      id + "." + prop.name);
        add(prop, id);
    }

    e.def = Concept{id, std::move(parents), std::move(own_properties)};
    order_.push_back(id);
    auto [it, inserted] = entries_.emplace(std::move(id), std::move(e));
    return it->second.def;
}

const Ontology::Entry &Ontology::entry(const std::string &id) const {
    auto it = entries_.find(id);
    if (it == entries_.end())
        throw UnknownConceptError("unknown concept '" + id + "'", id);
    return it->second;
}

const Concept &Ontology::get_concept(const std::string &id) const {
    return entry(id).def;
}

bool Ontology::is_subconcept(const std::string &a, const std::string &b) const {
    entry(b);
    std::vector<const std::string *> stack{&entry(a).def.id};
    std::set<std::string> seen;
    while (!stack.empty()) {
        const std::string &current = *stack.back();
        stack.pop_back();
        if (current == b)
            return true;
        if (!seen.insert(current).second)
            continue;
        for (const auto &parent : entries_.at(current).def.parents)
            stack.push_back(&parent);
    }
    return false;
}

const std::vector<PropertyDef> &Ontology::resolved_properties(const std::string &id) const {
    return entry(id).resolved;
}

const PropertyDef *Ontology::find_property(const std::string &concept_id,
                                           const std::string &name) const {
    for (const auto &prop : entry(concept_id).resolved)
        if (prop.name == name)
            return &prop;
    return nullptr;
}

std::vector<std::string> Ontology::lineage(const std::string &id) const {
    std::vector<std::string> result;
    std::deque<std::string> queue{entry(id).def.id};
    std::set<std::string> seen;
    while (!queue.empty()) {
        std::string current = queue.front();
        queue.pop_front();
        if (!seen.insert(current).second)
            continue;
        result.push_back(current);
        for (const auto &parent : entries_.at(current).def.parents)
            queue.push_back(parent);
    }
    return result;
}

Value get_value(const EnvironmentState &env, const std::string &instance_id,
                const std::string &property) {
    const Instance *instance = env.find(instance_id);
    if (!instance)
        throw UnknownInstanceError("unknown instance '" + instance_id + "'", instance_id);
    auto it = instance->values.find(property);
    if (it == instance->values.end())
        throw UnknownPropertyError("instance '" + instance_id + "' has no property '" + property +
                                       "'",
                                   instance_id + "." + property);
    return it->second;
}

bool is_container(const Instance &instance) {
    auto level = instance.values.find(kContentLevel);
    auto volume = instance.values.find(kContentVolume);
    return level != instance.values.end() && volume != instance.values.end() &&
           is_numeric(level->second.kind()) && is_numeric(volume->second.kind());
}

double content_level(const Instance &instance) {
    return instance.values.at(kContentLevel).as_number();
}

double content_volume(const Instance &instance) {
    return instance.values.at(kContentVolume).as_number();
}

namespace {

void check_container(const Instance &instance, std::vector<Issue> &issues) {
    if (!is_container(instance))
        return;
    double level = content_level(instance);
    double volume = content_volume(instance);
    if (level < -kEpsilon)
        issues.push_back({instance.id + "." + kContentLevel,
                          "contentLevel " + std::to_string(level) + " is negative"});
    if (level > volume + kEpsilon)
        issues.push_back({instance.id + "." + kContentLevel,
                          "contentLevel " + std::to_string(level) + " exceeds contentVolume " +
                              std::to_string(volume)});
}

void check_references(const EnvironmentState &env, const Value &value, const std::string &path,
                      std::vector<Issue> &issues) {
    switch (value.kind()) {
    case ValueKind::InstanceRef:
        if (!env.contains(value.as_instance_ref()))
            issues.push_back({path, "reference to unknown instance '" + value.as_instance_ref() + "'"});
        break;
    case ValueKind::Location:
        if (!env.contains(value.as_location().reference))
            issues.push_back({path, "location references unknown instance '" +
                                        value.as_location().reference + "'"});
        if (std::fabs(value.as_location().delta.quaternion_norm() - 1.0) > kEpsilon)
            issues.push_back({path, "orientation is not a unit quaternion"});
        break;
    case ValueKind::Pose:
        if (std::fabs(value.as_pose().quaternion_norm() - 1.0) > kEpsilon)
            issues.push_back({path, "orientation is not a unit quaternion"});
        break;
    case ValueKind::Collection:
        for (const auto &[key, element] : value.as_collection().elements)
            check_references(env, element, path + "[" + key + "]", issues);
        break;
    default:
        break;
    }
}

void check_instance(const Ontology &ontology, const EnvironmentState &env, const Instance &instance,
                    std::vector<Issue> &issues) {
    if (!ontology.has_concept(instance.concept_id)) {
        issues.push_back({instance.id, "unknown concept '" + instance.concept_id + "'"});
        return;
    }
    const auto &props = ontology.resolved_properties(instance.concept_id);
    for (const auto &prop : props) {
        std::string path = instance.id + "." + prop.name;
        auto it = instance.values.find(prop.name);
        if (it == instance.values.end()) {
            issues.push_back({path, "missing value"});
            continue;
        }
        if (it->second.kind() != prop.domain) {
            issues.push_back({path, "expected " + std::string(to_string(prop.domain)) + ", got " +
                                        std::string(to_string(it->second.kind()))});
            continue;
        }
        check_references(env, it->second, path, issues);
    }
    for (const auto &[name, value] : instance.values) {
        bool known = std::any_of(props.begin(), props.end(),
                                 [&](const PropertyDef &p) { return p.name == name; });
        if (!known)
            issues.push_back({instance.id + "." + name,
                              "property not defined by concept '" + instance.concept_id + "'"});
    }
    check_container(instance, issues);
}

}  // namespace

EnvironmentState set_value(const Ontology &ontology, const EnvironmentState &env,
                           const std::string &instance_id, const std::string &property,
                           Value value) {
    const Instance *instance = env.find(instance_id);
    if (!instance)
        throw UnknownInstanceError("unknown instance '" + instance_id + "'", instance_id);
    std::string path = instance_id + "." + property;
    const PropertyDef *def = ontology.find_property(instance->concept_id, property);
    if (!def)
        throw UnknownPropertyError("concept '" + instance->concept_id + "' has no property '" +
                                       property + "'",
                                   path);
    if (value.kind() != def->domain)
        throw DomainMismatchError("property '" + property + "' expects " +
                                      std::string(to_string(def->domain)) + ", got " +
                                      std::string(to_string(value.kind())),
                                  path);
    Instance updated = *instance;
    updated.values.insert_or_assign(property, std::move(value));
    std::vector<Issue> issues;
    check_container(updated, issues);
    if (!issues.empty())
        throw InvariantViolationError(issues.front().message, issues.front().path);
    return env.with(std::move(updated));
}

Instance complete_instance(const Ontology &ontology, Instance instance) {
    if (!ontology.has_concept(instance.concept_id))
        return instance;
    for (const auto &prop : ontology.resolved_properties(instance.concept_id))
        if (prop.default_value && !instance.values.count(prop.name))
            instance.values.emplace(prop.name, *prop.default_value);
    return instance;
}

std::vector<Issue> check_environment(const Ontology &ontology, const EnvironmentState &env) {
    std::vector<Issue> issues;
    for (const auto &[id, instance] : env.instances()) {
        if (instance.id != id)
            issues.push_back({id, "instance key does not match its id '" + instance.id + "'"});
        check_instance(ontology, env, instance, issues);
    }
    return issues;
}

void validate_environment(const Ontology &ontology, const EnvironmentState &env) {
    auto issues = check_environment(ontology, env);
    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

}  // namespace goalvar
