#ifndef GOALVAR_COMPARISON_H
#define GOALVAR_COMPARISON_H

#include "goalvar/kb.h"
#include "goalvar/value.h"
#include "goalvar/variation.h"

#include <string>
#include <variant>
#include <vector>

namespace goalvar {

enum class ReasonKind {
    BoundViolation,
    KindMismatch,
    ConceptMismatch,
    MissingElement,
    SizeMismatch,
    ValueMismatch,
};

std::string_view to_string(ReasonKind kind);
std::optional<ReasonKind> reason_kind_from_string(std::string_view name);

// A boolean function applied to arguments, e.g. LessEqual(6, 4), with the
// result membership required and the result actually observed.
struct Predicate {
    std::string function;
    std::vector<Value> arguments;
    bool expected = true;
    bool actual = false;
};

// Re-evaluates the numeric predicates (LessEqual, Less, GreaterEqual,
// Greater, Equal, NotEqual) with the library tolerance. Returns nullopt for
// functions that need context beyond their arguments.
std::optional<bool> evaluate(const Predicate &predicate);

struct Reason {
    ReasonKind kind = ReasonKind::ValueMismatch;
    Predicate detail;
};

using ComparisonTarget = std::variant<Value, Variation>;

// Explained contrast between a value and a target value or variation.
struct Comparison {
    std::string label;
    ComparisonTarget target;
    Value value;
    bool equal = true;
    std::vector<Comparison> sub_comparisons;
    std::vector<Reason> reasons;

    bool targets_variation() const { return std::holds_alternative<Variation>(target); }
};

Comparison compare_values(const Value &value, const Value &target, std::string label = {});

// Membership with explanations. Throws DomainMismatchError when the value's
// kind cannot belong to the variation's domain.
Comparison compare_to_variation(const Ontology &ontology, const Value &value,
                                const Variation &variation, std::string label = {});

// One entity property outside its target variation.
struct PropertyDifference {
    std::string instance;
    std::string concept_id;
    std::string property;
    Value current;
    Variation target;
    Comparison comparison;
};

}  // namespace goalvar

#endif
