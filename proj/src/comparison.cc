#include "goalvar/comparison.h"

#include "goalvar/matching.h"

#include <array>
#include <cmath>
#include <set>

namespace goalvar {

namespace {

constexpr std::array<std::string_view, 6> kReasonNames = {
    "BoundViolation", "KindMismatch", "ConceptMismatch", "MissingElement", "SizeMismatch",
    "ValueMismatch"};

Reason make_reason(ReasonKind kind, std::string function, std::vector<Value> arguments,
                   bool expected, bool actual) {
    return Reason{kind, Predicate{std::move(function), std::move(arguments), expected, actual}};
}

Comparison leaf(std::string label, ComparisonTarget target, Value value) {
    Comparison c;
    c.label = std::move(label);
    c.target = std::move(target);
    c.value = std::move(value);
    return c;
}

Value collection_of_instances(const EnvironmentState &env) {
    Collection c;
    for (const auto &[id, instance] : env.instances())
        c.elements.emplace(id, Value::instance(instance));
    return Value::collection(std::move(c));
}

void compare_maps(const std::map<std::string, Value> &value, const std::map<std::string, Value> &target,
                  Comparison &out) {
    std::set<std::string> keys;
    for (const auto &[k, v] : value)
        keys.insert(k);
    for (const auto &[k, v] : target)
        keys.insert(k);
    for (const auto &key : keys) {
        auto vit = value.find(key);
        auto tit = target.find(key);
        if (vit == value.end() || tit == target.end()) {
            out.reasons.push_back(make_reason(ReasonKind::MissingElement, "HasKey",
                                              {Value::instance_ref(key)}, true, false));
            continue;
        }
        out.sub_comparisons.push_back(compare_values(vit->second, tit->second, key));
    }
}

}  // namespace

std::string_view to_string(ReasonKind kind) {
    return kReasonNames[static_cast<std::size_t>(kind)];
}

std::optional<ReasonKind> reason_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kReasonNames.size(); ++i)
        if (kReasonNames[i] == name)
            return static_cast<ReasonKind>(i);
    return std::nullopt;
}

std::optional<bool> evaluate(const Predicate &p) {
    if (p.arguments.size() != 2)
        return std::nullopt;
    const Value &a = p.arguments[0];
    const Value &b = p.arguments[1];
    if (p.function == "Equal")
        return values_equal(a, b);
    if (p.function == "NotEqual")
        return !values_equal(a, b);
    if (!is_numeric(a.kind()) || !is_numeric(b.kind()))
        return std::nullopt;
    double x = a.as_number();
    double y = b.as_number();
    if (p.function == "LessEqual")
        return x <= y + kEpsilon;
    if (p.function == "Less")
        return x < y;
    if (p.function == "GreaterEqual")
        return x >= y - kEpsilon;
    if (p.function == "Greater")
        return x > y;
    return std::nullopt;
}

Comparison compare_values(const Value &value, const Value &target, std::string label) {
    Comparison c = leaf(std::move(label), target, value);
    if (value.kind() != target.kind()) {
        c.equal = false;
        c.reasons.push_back(make_reason(ReasonKind::KindMismatch, "SameValueDomain",
                                        {Value::concept_ref(std::string(to_string(value.kind()))),
                                         Value::concept_ref(std::string(to_string(target.kind())))},
                                        true, false));
        return c;
    }
    c.equal = values_equal(value, target);
    if (c.equal)
        return c;

    switch (value.kind()) {
    case ValueKind::Location:
        c.sub_comparisons.push_back(compare_values(Value::pose(value.as_location().delta),
                                                   Value::pose(target.as_location().delta), "Pose"));
        c.sub_comparisons.push_back(
            compare_values(Value::instance_ref(value.as_location().reference),
                           Value::instance_ref(target.as_location().reference), "Instance"));
        break;
    case ValueKind::Collection: {
        const auto &x = value.as_collection().elements;
        const auto &y = target.as_collection().elements;
        Comparison size = compare_values(Value::integer(static_cast<std::int64_t>(x.size())),
                                         Value::integer(static_cast<std::int64_t>(y.size())), "size");
        if (!size.equal)
            size.reasons.front().kind = ReasonKind::SizeMismatch;
        c.sub_comparisons.push_back(std::move(size));
        compare_maps(x, y, c);
        break;
    }
    case ValueKind::Instance: {
        const Instance &x = value.as_instance();
        const Instance &y = target.as_instance();
        Comparison concept_cmp = compare_values(Value::concept_ref(x.concept_id),
                                                Value::concept_ref(y.concept_id), "concept");
        c.sub_comparisons.push_back(std::move(concept_cmp));
        compare_maps(x.values, y.values, c);
        break;
    }
    case ValueKind::Environment:
        c.sub_comparisons.push_back(compare_values(collection_of_instances(value.as_environment()),
                                                   collection_of_instances(target.as_environment()),
                                                   "instances"));
        break;
    case ValueKind::ConceptRef:
        c.reasons.push_back(make_reason(ReasonKind::ConceptMismatch, "Equal", {value, target}, true,
                                        false));
        break;
    default:
        c.reasons.push_back(make_reason(ReasonKind::ValueMismatch, "Equal", {value, target}, true,
                                        false));
        break;
    }
    return c;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void bound_check(Comparison &c, const char *closed_fn, const char *open_fn, bool closed, double lhs,
                 double rhs) {
    Predicate p{closed ? closed_fn : open_fn, {Value::number(lhs), Value::number(rhs)}, true, false};
    bool holds = *evaluate(p);
    if (!holds)
        c.reasons.push_back(Reason{ReasonKind::BoundViolation, std::move(p)});
}

void concept_check(const Ontology &ontology, Comparison &c, const ConceptVariation &cv,
                   const std::string &concept_id) {
    if (cv.include_subconcepts) {
        bool ok = concept_id == cv.base ||
                  (ontology.has_concept(concept_id) && ontology.has_concept(cv.base) &&
                   ontology.is_subconcept(concept_id, cv.base));
        if (!ok)
            c.reasons.push_back(make_reason(ReasonKind::ConceptMismatch, "IsSubconcept",
                                            {Value::concept_ref(concept_id), Value::concept_ref(cv.base)},
                                            true, false));
    } else if (concept_id != cv.base) {
        c.reasons.push_back(make_reason(ReasonKind::ConceptMismatch, "Equal",
                                        {Value::concept_ref(concept_id), Value::concept_ref(cv.base)},
                                        true, false));
    }
}

void explain_subset(const Ontology &ontology, Comparison &c, const KeyedValues &elements,
                    const CollectionSubsetVariation &subset) {
    MatchResult match = collection_member(ontology, elements, subset);
    c.equal = match.satisfied;
    if (c.equal)
        return;
    for (const auto &[index, witnesses] : match.failure_witness) {
        std::string prefix = "elements[" + std::to_string(index) + "]";
        if (witnesses.empty()) {
            c.reasons.push_back(make_reason(ReasonKind::MissingElement, "Exists",
                                            {Value::integer(static_cast<std::int64_t>(index))}, true,
                                            false));
            continue;
        }
        bool any_member = false;
        for (const auto &w : witnesses) {
            any_member = any_member || w.equal;
            Comparison sub = w;
            sub.label = prefix + ":" + w.label;
            c.sub_comparisons.push_back(std::move(sub));
        }
        // Every candidate that fits is taken by another element variation.
        if (any_member)
            c.reasons.push_back(make_reason(ReasonKind::SizeMismatch, "DistinctElementAvailable",
                                            {Value::integer(static_cast<std::int64_t>(index))}, true,
                                            false));
    }
}

}  // namespace

Comparison compare_to_variation(const Ontology &ontology, const Value &value,
                                const Variation &variation, std::string label) {
    Comparison c = leaf(std::move(label), variation, value);
    std::visit(
        overloaded{
            [&](const EmptyVariation &) {
                c.equal = false;
                c.reasons.push_back(make_reason(ReasonKind::ValueMismatch, "InEmptySet", {value}, true,
                                                false));
            },
            [&](const WholeVariation &) { c.equal = true; },
            [&](const FixedVariation &f) {
                contains(ontology, variation, value);  // kind check
                Comparison sub = compare_values(value, f.value, "Fixed");
                c.equal = sub.equal;
                if (!c.equal)
                    c.sub_comparisons.push_back(std::move(sub));
            },
            [&](const IntervalVariation &i) {
                if (!is_numeric(value.kind()))
                    contains(ontology, variation, value);  // throws
                double x = value.as_number();
                bound_check(c, "LessEqual", "Less", i.lower_closed, i.lower, x);
                bound_check(c, "LessEqual", "Less", i.upper_closed, x, i.upper);
                c.equal = c.reasons.empty();
            },
            [&](const UnionVariation &u) {
                std::vector<Comparison> subs;
                bool any = false;
                for (std::size_t k = 0; k < u.members.size(); ++k) {
                    subs.push_back(compare_to_variation(ontology, value, u.members[k],
                                                        "members[" + std::to_string(k) + "]"));
                    any = any || subs.back().equal;
                }
                c.equal = any;
                if (!any) {
                    c.sub_comparisons = std::move(subs);
                    if (u.members.empty())
                        c.reasons.push_back(make_reason(ReasonKind::ValueMismatch, "InEmptySet",
                                                        {value}, true, false));
                }
            },
            [&](const IntersectionVariation &u) {
                c.equal = true;
                for (std::size_t k = 0; k < u.members.size(); ++k) {
                    Comparison sub = compare_to_variation(ontology, value, u.members[k],
                                                          "members[" + std::to_string(k) + "]");
                    if (!sub.equal) {
                        c.equal = false;
                        c.sub_comparisons.push_back(std::move(sub));
                    }
                }
            },
            [&](const ConceptVariation &cv) {
                if (value.kind() == ValueKind::ConceptRef)
                    concept_check(ontology, c, cv, value.as_concept());
                else if (value.kind() == ValueKind::Instance)
                    concept_check(ontology, c, cv, value.as_instance().concept_id);
                else
                    contains(ontology, variation, value);  // throws
                c.equal = c.reasons.empty();
            },
            [&](const BallVariation &ball) {
                contains(ontology, variation, value);  // kind check
                const Pose *pose = value.kind() == ValueKind::Location ? &value.as_location().delta
                                                                       : &value.as_pose();
                if (ball.reference) {
                    Comparison ref = compare_values(Value::instance_ref(value.as_location().reference),
                                                    Value::instance_ref(*ball.reference), "Instance");
                    if (!ref.equal)
                        c.sub_comparisons.push_back(std::move(ref));
                }
                bound_check(c, "LessEqual", "Less", true, position_distance(*pose, ball.center),
                            ball.max_distance);
                bound_check(c, "LessEqual", "Less", true, rotation_angle(*pose, ball.center),
                            ball.max_angle);
                c.equal = c.reasons.empty() && c.sub_comparisons.empty();
            },
            [&](const InstancePropertiesVariation &ipv) {
                if (value.kind() != ValueKind::Instance)
                    contains(ontology, variation, value);  // throws
                const Instance &instance = value.as_instance();
                Comparison concept_cmp = compare_to_variation(
                    ontology, Value::concept_ref(instance.concept_id), ipv.concept_variation, "concept");
                if (!concept_cmp.equal)
                    c.sub_comparisons.push_back(std::move(concept_cmp));
                for (const auto &[name, v] : ipv.properties) {
                    auto it = instance.values.find(name);
                    if (it == instance.values.end()) {
                        c.reasons.push_back(make_reason(ReasonKind::MissingElement, "HasKey",
                                                        {Value::instance_ref(name)}, true, false));
                        continue;
                    }
                    Comparison sub = compare_to_variation(ontology, it->second, v, name);
                    if (!sub.equal)
                        c.sub_comparisons.push_back(std::move(sub));
                }
                c.equal = c.reasons.empty() && c.sub_comparisons.empty();
            },
            [&](const CollectionSubsetVariation &subset) {
                KeyedValues elements;
                if (value.kind() == ValueKind::Collection) {
                    for (const auto &[key, element] : value.as_collection().elements)
                        elements.emplace_back(key, element);
                } else if (value.kind() == ValueKind::Environment) {
                    elements = instance_values(value.as_environment());
                } else {
                    contains(ontology, variation, value);  // throws
                }
                explain_subset(ontology, c, elements, subset);
            },
            [&](const EnvironmentVariation &ev) {
                if (value.kind() != ValueKind::Environment)
                    contains(ontology, variation, value);  // throws
                Comparison sub = compare_to_variation(ontology, value, Variation(ev.entities), "instances");
                c.equal = sub.equal;
                if (!c.equal)
                    c.sub_comparisons.push_back(std::move(sub));
            },
        },
        variation.node());
    return c;
}

}  // namespace goalvar
