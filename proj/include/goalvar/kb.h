#ifndef GOALVAR_KB_H
#define GOALVAR_KB_H

#include "goalvar/errors.h"
#include "goalvar/value.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace goalvar {

// Well-known container properties, in liters.
inline constexpr const char *kContentLevel = "contentLevel";
inline constexpr const char *kContentVolume = "contentVolume";

struct PropertyDef {
    std::string name;
    ValueKind domain = ValueKind::Number;
    std::optional<std::string> unit;
    // Filled into instances that omit the property when they are loaded.
    std::optional<Value> default_value;
};

struct Concept {
    std::string id;
    std::vector<std::string> parents;
    std::vector<PropertyDef> own_properties;
};

// Concept hierarchy with typed properties. Concepts are registered
// parents-first, so the graph stays acyclic by construction; the only cycle
// a caller can attempt is naming the concept as its own parent.
class Ontology {
public:
    const Concept &define_concept(std::string id, std::vector<std::string> parents,
                                  std::vector<PropertyDef> own_properties);

    bool has_concept(const std::string &id) const { return entries_.count(id) > 0; }
    const Concept &get_concept(const std::string &id) const;

    // Reflexive, transitive reachability over parent edges.
    bool is_subconcept(const std::string &a, const std::string &b) const;

    // Ancestors first (depth-first, parents in declaration order), then own.
    const std::vector<PropertyDef> &resolved_properties(const std::string &id) const;
    const PropertyDef *find_property(const std::string &concept_id, const std::string &name) const;

    // `id` followed by every proper ancestor, nearest first (breadth-first).
    std::vector<std::string> lineage(const std::string &id) const;

    // Declaration order.
    const std::vector<std::string> &concept_ids() const { return order_; }

private:
    struct Entry {
        Concept def;
        std::vector<PropertyDef> resolved;
        std::vector<std::string> origins;  // defining concept per resolved property
    };

    const Entry &entry(const std::string &id) const;

    std::map<std::string, Entry> entries_;
    std::vector<std::string> order_;
};

Value get_value(const EnvironmentState &env, const std::string &instance_id,
                const std::string &property);

// Returns an updated copy; `env` itself is never touched.
EnvironmentState set_value(const Ontology &ontology, const EnvironmentState &env,
                           const std::string &instance_id, const std::string &property,
                           Value value);

// Fills properties missing from `instance` with their ontology defaults.
Instance complete_instance(const Ontology &ontology, Instance instance);

// Every instance conforms to its concept and every reference resolves.
std::vector<Issue> check_environment(const Ontology &ontology, const EnvironmentState &env);
void validate_environment(const Ontology &ontology, const EnvironmentState &env);

bool is_container(const Instance &instance);
double content_level(const Instance &instance);
double content_volume(const Instance &instance);

}  // namespace goalvar

#endif
