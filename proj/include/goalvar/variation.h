#ifndef GOALVAR_VARIATION_H
#define GOALVAR_VARIATION_H

#include "goalvar/errors.h"
#include "goalvar/kb.h"
#include "goalvar/value.h"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace goalvar {

class Variation;

struct EmptyVariation {};
struct WholeVariation {};

struct FixedVariation {
    Value value;
};

// Numeric range; each bound is open or closed.
struct IntervalVariation {
    double lower = 0.0;
    bool lower_closed = true;
    double upper = 0.0;
    bool upper_closed = true;
};

struct UnionVariation {
    std::vector<Variation> members;
};

struct IntersectionVariation {
    std::vector<Variation> members;
};

struct ConceptVariation {
    std::string base;
    bool include_subconcepts = true;
};

// Pose (or Location, when `reference` is set) within a translation radius
// and rotation angle of `center`.
struct BallVariation {
    std::optional<std::string> reference;
    Pose center;
    double max_distance = 0.0;  // meters
    double max_angle = 0.0;     // radians
};

struct InstancePropertiesVariation {
    ConceptVariation concept_variation;
    std::map<std::string, Variation> properties;
};

// Every element variation must be satisfied by a distinct collection element.
struct CollectionSubsetVariation {
    std::vector<Variation> elements;
};

struct EnvironmentVariation {
    CollectionSubsetVariation entities;
};

// A represented subset of one value domain.
class Variation {
public:
    using Node = std::variant<EmptyVariation, WholeVariation, FixedVariation, IntervalVariation,
                              UnionVariation, IntersectionVariation, ConceptVariation,
                              BallVariation, InstancePropertiesVariation,
                              CollectionSubsetVariation, EnvironmentVariation>;

    Variation() : node_(EmptyVariation{}) {}
    template <typename T, typename = std::enable_if_t<std::is_constructible_v<Node, T &&> &&
                                                      !std::is_same_v<std::decay_t<T>, Variation>>>
    Variation(T &&node) : node_(std::forward<T>(node)) {}

    const Node &node() const { return node_; }

    template <typename T>
    const T *get_if() const { return std::get_if<T>(&node_); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(node_); }

    static Variation empty() { return EmptyVariation{}; }
    static Variation whole() { return WholeVariation{}; }
    static Variation fixed(Value v) { return FixedVariation{std::move(v)}; }
    static Variation closed(double lower, double upper) {
        return IntervalVariation{lower, true, upper, true};
    }
    static Variation interval(double lower, bool lower_closed, double upper, bool upper_closed) {
        return IntervalVariation{lower, lower_closed, upper, upper_closed};
    }
    static Variation any_of(std::vector<Variation> members) { return UnionVariation{std::move(members)}; }
    static Variation all_of(std::vector<Variation> members) {
        return IntersectionVariation{std::move(members)};
    }

private:
    Node node_;
};

// Name used in documents ("Interval", "MapRangeInstanceSubset", ...).
std::string_view type_name(const Variation &variation);

// Structural equality (numbers within eps).
bool variations_equal(const Variation &a, const Variation &b, double eps = kEpsilon);

// Membership. Throws DomainMismatchError when `value` cannot belong to the
// variation's domain at all. Numeric closed bounds and fixed values are
// tolerant by kEpsilon; open bounds are strict.
bool contains(const Ontology &ontology, const Variation &variation, const Value &value);

bool interval_contains(const IntervalVariation &interval, double x);

// Normalized numeric variation: disjoint, sorted maximal components.
class IntervalSet {
public:
    static IntervalSet empty() { return IntervalSet(); }
    static IntervalSet whole();
    static IntervalSet of(const IntervalVariation &interval);

    // Throws DomainMismatchError for non-numeric nodes.
    static IntervalSet from_variation(const Variation &variation);

    IntervalSet unite(const IntervalSet &other) const;
    IntervalSet intersect(const IntervalSet &other) const;

    bool contains(double x) const;
    bool is_empty() const { return components_.empty(); }
    const std::vector<IntervalVariation> &components() const { return components_; }

    Variation to_variation() const;

private:
    std::vector<IntervalVariation> components_;
};

// Closest attainable point of each maximal component, nearest to `current`
// first (ties: smaller value). Open bounds are nudged inward by kEpsilon.
std::vector<double> nearest_targets(const Variation &numeric_variation, double current);

// Structural and domain checks; empty result means valid.
std::vector<Issue> check_variation(const Ontology &ontology, const Variation &variation,
                                   ValueKind domain, const std::string &path = "$");
void validate(const Ontology &ontology, const Variation &variation, ValueKind domain);

// Parses interval-set notation such as "[0.1, 0.2] u (0.5, 0.6]".
Variation parse_interval_set(const std::string &text);
std::string format_interval_set(const Variation &variation);

}  // namespace goalvar

#endif
