#include "goalvar/goal_session.h"

#include "goalvar/comparison.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace goalvar {

namespace {

const ParameterSpec kValue{"value", AnswerType::Number, "value"};
const ParameterSpec kIntervals{"intervals", AnswerType::Text, "interval set"};

const std::vector<VariationKindSpec> kNumericKinds{
    {"Fixed", "a fixed value", {kValue}},
    {"Interval",
     "an interval",
     {{"lower", AnswerType::Number, "lower bound"},
      {"lowerClosed", AnswerType::Boolean, "lower bound included"},
      {"upper", AnswerType::Number, "upper bound"},
      {"upperClosed", AnswerType::Boolean, "upper bound included"}}},
    {"Union", "a union of intervals", {kIntervals}},
    {"Intersection", "an intersection of intervals", {kIntervals}},
    {"Whole", "any value", {}},
};

const std::vector<VariationKindSpec> kSpatialKinds{
    {"Fixed", "exactly the final value", {}},
    {"Ball",
     "within a distance and angle of the final value",
     {{"maxDistance", AnswerType::Number, "maximum distance (m)"},
      {"maxAngle", AnswerType::Number, "maximum rotation (rad)"}}},
    {"Whole", "any value", {}},
};

const std::vector<VariationKindSpec> kDiscreteKinds{
    {"Fixed", "exactly the final value", {}},
    {"Whole", "any value", {}},
};

const std::vector<VariationKindSpec> kConceptKinds{
    {"ConceptRange", "the concept or a generalization of it",
     {{"includeSubconcepts", AnswerType::Boolean, "include subconcepts"}}},
    {"Fixed", "exactly this concept", {}},
    {"Whole", "any concept that has the selected properties", {}},
};

std::string format_number(double x) {
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

std::string describe_answer(const Answer &a) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                std::string out = "[";
                for (std::size_t i = 0; i < v.size(); ++i)
                    out += (i ? ", " : "") + v[i];
                return out + "]";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return "'" + v + "'";
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return format_number(v);
            }
        },
        a);
}

[[noreturn]] void invalid(const Question &q, const std::string &why) {
    throw InvalidAnswerError(why, q.id);
}

template <typename T>
const T &expect_type(const Question &q, const Answer &a, const char *what) {
    const T *v = std::get_if<T>(&a);
    if (!v)
        invalid(q, "question '" + q.id + "' expects " + what + ", got " + describe_answer(a));
    return *v;
}

bool offered(const Question &q, const std::string &id) {
    return std::any_of(q.options.begin(), q.options.end(), [&](const Option &o) { return o.id == id; });
}

ValueKind domain_of(const Model &model, const ChangedEntity &entity, const PropertyChange &change) {
    if (const PropertyDef *def = model.ontology.find_property(entity.concept_id, change.property))
        return def->domain;
    return change.after.kind();
}

Answer parameter_default(const std::string &kind, const ParameterSpec &spec, const Value &final_value) {
    double x = is_numeric(final_value.kind()) ? final_value.as_number() : 0.0;
    double margin = std::fabs(x) * 0.1;
    if (spec.name == "value")
        return x;
    if (spec.name == "lower")
        return x - margin;
    if (spec.name == "upper")
        return x + margin;
    if (spec.name == "lowerClosed" || spec.name == "upperClosed" || spec.name == "includeSubconcepts")
        return true;
    if (spec.name == "intervals")
        return format_interval_set(Variation::closed(x - margin, x + margin));
    if (spec.name == "maxDistance")
        return 0.05;
    if (spec.name == "maxAngle")
        return 0.1;
    (void)kind;
    return 0.0;
}

std::vector<Option> parameter_options(AnswerType type) {
    switch (type) {
    case AnswerType::Boolean:
        return {{"true", "yes"}, {"false", "no"}};
    case AnswerType::Text:
        return {{"text", "interval set, e.g. [0.1, 0.2] u (0.4, 0.5]"}};
    default:
        return {{"number", "a number"}};
    }
}

Variation interval_set_variation(const std::string &kind, const std::string &text) {
    Variation parsed = parse_interval_set(text);
    if (kind == "Intersection") {
        if (auto u = parsed.get_if<UnionVariation>())
            return Variation::all_of(u->members);
    }
    return parsed;
}

}  // namespace

std::string_view to_string(QuestionKind kind) {
    switch (kind) {
    case QuestionKind::SelectRelevantEntities:
        return "SelectRelevantEntities";
    case QuestionKind::SelectRelevantProperties:
        return "SelectRelevantProperties";
    case QuestionKind::SelectVariationKind:
        return "SelectVariationKind";
    case QuestionKind::ProvideParameters:
        return "ProvideParameters";
    case QuestionKind::GeneralizeConcept:
        return "GeneralizeConcept";
    }
    return "";
}

std::string_view to_string(AnswerType type) {
    switch (type) {
    case AnswerType::MultiSelect:
        return "MultiSelect";
    case AnswerType::SingleSelect:
        return "SingleSelect";
    case AnswerType::Number:
        return "Number";
    case AnswerType::Boolean:
        return "Boolean";
    case AnswerType::Text:
        return "Text";
    }
    return "";
}

const std::vector<VariationKindSpec> &variation_kinds(ValueKind domain) {
    switch (domain) {
    case ValueKind::Number:
    case ValueKind::Integer:
        return kNumericKinds;
    case ValueKind::Pose:
    case ValueKind::Location:
        return kSpatialKinds;
    default:
        return kDiscreteKinds;
    }
}

const std::vector<VariationKindSpec> &concept_variation_kinds() {
    return kConceptKinds;
}

std::size_t max_parameters(ValueKind domain) {
    std::size_t out = 0;
    for (const auto &k : variation_kinds(domain))
        out = std::max(out, k.parameters.size());
    return out;
}

DemonstrationDiff diff_demonstration(const Model &model, const EnvironmentState &before,
                                     const EnvironmentState &after) {
    DemonstrationDiff diff;
    for (const auto &[id, b] : before.instances()) {
        const Instance *a = after.find(id);
        if (!a)
            continue;
        ChangedEntity entity{id, a->concept_id, {}};
        for (const auto &[name, now] : a->values) {
            auto it = b.values.find(name);
            if (it == b.values.end())
                continue;
            if (!compare_values(now, it->second, name).equal)
                entity.changes.push_back({name, it->second, now});
        }
        if (!entity.changes.empty())
            diff.changed.push_back(std::move(entity));
    }
    diff.recognized = recognize_skills(model.ontology, model.skills, {before, after});
    return diff;
}

std::size_t question_bound(const Model &model, const DemonstrationDiff &diff) {
    if (diff.changed.empty())
        return 0;
    const std::size_t concept_block = 1 + 1 + concept_variation_kinds().front().parameters.size();
    std::size_t total = 1;
    for (const auto &entity : diff.changed) {
        total += 1 + concept_block;
        for (const auto &change : entity.changes)
            total += 1 + max_parameters(domain_of(model, entity, change));
    }
    return total;
}

Session Session::start(const Model &model, std::string id, EnvironmentState before,
                       EnvironmentState after) {
    validate_environment(model.ontology, before);
    validate_environment(model.ontology, after);
    Session s;
    s.id_ = std::move(id);
    s.diff_ = diff_demonstration(model, before, after);
    if (s.diff_.changed.empty())
        throw NoChangesDetectedError("the demonstration changed no entity property", "after");
    s.before_ = std::move(before);
    s.after_ = std::move(after);
    s.bound_ = question_bound(model, s.diff_);
    s.pending_ = s.make_question(model);
    return s;
}

Session Session::answer(const Model &model, const Answer &answer) const {
    if (!pending_)
        throw Error("session_complete", "session '" + id_ + "' is already complete", id_);
    Session next = *this;
    next.apply(model, answer);
    next.transcript_.push_back({*pending_, answer});
    next.advance(model);
    ++next.version_;
    if (next.stage_ == Stage::Done) {
        next.pending_.reset();
        next.result_ = next.assemble(model);
    } else {
        next.pending_ = next.make_question(model);
    }
    return next;
}

const PropertyChange &Session::change_of(const ChangedEntity &entity, const std::string &property) const {
    for (const auto &c : entity.changes)
        if (c.property == property)
            return c;
    throw UnknownPropertyError("no change recorded for '" + property + "'", entity.id + "." + property);
}

const VariationKindSpec &Session::kind_spec(const Model &model, const ChangedEntity &entity,
                                            const PropertyChoice &choice) const {
    const auto &kinds = variation_kinds(domain_of(model, entity, change_of(entity, choice.property)));
    for (const auto &k : kinds)
        if (k.id == choice.kind)
            return k;
    throw InvalidAnswerError("unknown variation kind '" + choice.kind + "'");
}

std::vector<std::string> Session::base_options(const Model &model, const EntityChoice &choice) const {
    const ChangedEntity &entity = diff_.changed[choice.index];
    std::vector<std::string> out;
    for (const auto &c : model.ontology.lineage(entity.concept_id)) {
        bool defines_all = std::all_of(choice.properties.begin(), choice.properties.end(),
                                       [&](const PropertyChoice &p) {
                                           return model.ontology.find_property(c, p.property) != nullptr;
                                       });
        if (defines_all)
            out.push_back(c);
    }
    return out;
}

std::string Session::general_base(const Model &model, const EntityChoice &choice) const {
    return base_options(model, choice).back();
}

Question Session::make_question(const Model &model) const {
    Question q;
    if (stage_ == Stage::Entities) {
        q.id = "entities";
        q.kind = QuestionKind::SelectRelevantEntities;
        q.answer_type = AnswerType::MultiSelect;
        q.text = "Which of the changed entities are relevant to the goal?";
        std::vector<std::string> all;
        for (const auto &e : diff_.changed) {
            q.options.push_back({e.id, e.id + " (" + e.concept_id + ")"});
            all.push_back(e.id);
        }
        q.default_answer = all;
        return q;
    }

    const EntityChoice &choice = entities_[entity_];
    const ChangedEntity &entity = diff_.changed[choice.index];
    q.entity = entity.id;

    switch (stage_) {
    case Stage::Properties: {
        q.id = "properties:" + entity.id;
        q.kind = QuestionKind::SelectRelevantProperties;
        q.answer_type = AnswerType::MultiSelect;
        q.text = "Which changed properties of " + entity.id + " are relevant?";
        std::vector<std::string> all;
        for (const auto &c : entity.changes) {
            q.options.push_back({c.property, c.property + ": " + describe(c.before) + " -> " + describe(c.after)});
            all.push_back(c.property);
        }
        q.default_answer = all;
        return q;
    }
    case Stage::Kind: {
        const PropertyChoice &p = choice.properties[property_];
        const PropertyChange &change = change_of(entity, p.property);
        ValueKind domain = domain_of(model, entity, change);
        q.id = "kind:" + entity.id + ":" + p.property;
        q.kind = QuestionKind::SelectVariationKind;
        q.answer_type = AnswerType::SingleSelect;
        q.property = p.property;
        q.text = "Which values of " + entity.id + "." + p.property + " satisfy the goal? (final value " +
                 describe(change.after) + ")";
        for (const auto &k : variation_kinds(domain))
            q.options.push_back({k.id, k.label});
        q.default_answer = std::string(is_numeric(domain) ? "Interval" : "Fixed");
        return q;
    }
    case Stage::Parameter: {
        const PropertyChoice &p = choice.properties[property_];
        const ParameterSpec &spec = kind_spec(model, entity, p).parameters[parameter_];
        q.id = "param:" + entity.id + ":" + p.property + ":" + spec.name;
        q.kind = QuestionKind::ProvideParameters;
        q.answer_type = spec.type;
        q.property = p.property;
        q.variation_kind = p.kind;
        q.parameter = spec.name;
        q.text = p.kind + " for " + entity.id + "." + p.property + ": " + spec.label;
        q.options = parameter_options(spec.type);
        q.default_answer = parameter_default(p.kind, spec, change_of(entity, p.property).after);
        return q;
    }
    case Stage::ConceptKind: {
        q.id = "kind:" + entity.id + ":" + kConceptProperty;
        q.kind = QuestionKind::SelectVariationKind;
        q.answer_type = AnswerType::SingleSelect;
        q.property = kConceptProperty;
        q.text = "Which entities may take the role of " + entity.id + " (" + entity.concept_id + ")?";
        for (const auto &k : concept_variation_kinds())
            q.options.push_back({k.id, k.label});
        q.default_answer = std::string("ConceptRange");
        return q;
    }
    case Stage::ConceptBase: {
        q.id = "concept:" + entity.id;
        q.kind = QuestionKind::GeneralizeConcept;
        q.answer_type = AnswerType::SingleSelect;
        q.property = kConceptProperty;
        q.variation_kind = "ConceptRange";
        q.text = "Generalize " + entity.id + " from " + entity.concept_id + " to";
        for (const auto &c : base_options(model, choice))
            q.options.push_back({c, c});
        q.default_answer = entity.concept_id;
        return q;
    }
    case Stage::ConceptInclude: {
        q.id = "param:" + entity.id + ":" + kConceptProperty + ":includeSubconcepts";
        q.kind = QuestionKind::ProvideParameters;
        q.answer_type = AnswerType::Boolean;
        q.property = kConceptProperty;
        q.variation_kind = "ConceptRange";
        q.parameter = "includeSubconcepts";
        q.text = "Do subconcepts of " + choice.concept_base + " also qualify?";
        q.options = parameter_options(AnswerType::Boolean);
        q.default_answer = true;
        return q;
    }
    default:
        break;
    }
    return q;
}

void Session::apply(const Model &model, const Answer &answer) {
    const Question &q = *pending_;

    auto select_subset = [&](const std::vector<Option> &options) {
        const auto &picked = expect_type<std::vector<std::string>>(q, answer, "a list of option ids");
        std::set<std::string> seen;
        for (const auto &id : picked) {
            if (!offered(q, id))
                invalid(q, "'" + id + "' is not an option of question '" + q.id + "'");
            if (!seen.insert(id).second)
                invalid(q, "'" + id + "' selected twice");
        }
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < options.size(); ++i)
            if (seen.count(options[i].id))
                out.push_back(i);
        return out;
    };
    auto select_one = [&]() -> const std::string & {
        const auto &picked = expect_type<std::string>(q, answer, "an option id");
        if (!offered(q, picked))
            invalid(q, "'" + picked + "' is not an option of question '" + q.id + "'");
        return picked;
    };

    switch (stage_) {
    case Stage::Entities:
        for (std::size_t i : select_subset(q.options))
            entities_.push_back(EntityChoice{i, {}, {}, {}, true});
        return;
    case Stage::Properties: {
        EntityChoice &choice = entities_[entity_];
        for (std::size_t i : select_subset(q.options))
            choice.properties.push_back({q.options[i].id, {}, {}});
        return;
    }
    case Stage::Kind:
        entities_[entity_].properties[property_].kind = select_one();
        return;
    case Stage::Parameter: {
        PropertyChoice &p = entities_[entity_].properties[property_];
        const ChangedEntity &entity = diff_.changed[entities_[entity_].index];
        ValueKind domain = domain_of(model, entity, change_of(entity, p.property));
        switch (q.answer_type) {
        case AnswerType::Number: {
            double x = expect_type<double>(q, answer, "a number");
            if (!std::isfinite(x))
                invalid(q, "value must be finite");
            if (q.parameter == "value" && domain == ValueKind::Integer && std::fabs(x - std::round(x)) > kEpsilon)
                invalid(q, "value must be an integer");
            if (q.parameter == "maxDistance" && x < 0.0)
                invalid(q, "distance must be non-negative");
            if (q.parameter == "maxAngle" && (x < 0.0 || x > std::numbers::pi + kEpsilon))
                invalid(q, "angle must lie in [0, pi]");
            if (q.parameter == "upper" && x < std::get<double>(p.parameters.at("lower")))
                invalid(q, "upper bound is below the lower bound");
            break;
        }
        case AnswerType::Boolean: {
            bool closed = expect_type<bool>(q, answer, "true or false");
            if (q.parameter == "upperClosed") {
                double lower = std::get<double>(p.parameters.at("lower"));
                double upper = std::get<double>(p.parameters.at("upper"));
                bool lower_closed = std::get<bool>(p.parameters.at("lowerClosed"));
                if (lower == upper && !(lower_closed && closed))
                    invalid(q, "an interval with equal bounds must be closed on both sides");
            }
            break;
        }
        case AnswerType::Text: {
            const auto &text = expect_type<std::string>(q, answer, "interval-set text");
            Variation v;
            try {
                v = interval_set_variation(p.kind, text);
            } catch (const Error &e) {
                invalid(q, e.what());
            }
            if (!check_variation(model.ontology, v, domain).empty() || IntervalSet::from_variation(v).is_empty())
                invalid(q, "'" + text + "' selects no value");
            break;
        }
        default:
            break;
        }
        p.parameters[q.parameter] = answer;
        return;
    }
    case Stage::ConceptKind:
        entities_[entity_].concept_kind = select_one();
        return;
    case Stage::ConceptBase:
        entities_[entity_].concept_base = select_one();
        return;
    case Stage::ConceptInclude:
        entities_[entity_].include_subconcepts = expect_type<bool>(q, answer, "true or false");
        return;
    case Stage::Done:
        return;
    }
}

void Session::advance(const Model &model) {
    auto next_entity = [&] {
        ++entity_;
        if (entity_ < entities_.size()) {
            stage_ = Stage::Properties;
        } else {
            stage_ = Stage::Done;
        }
    };
    auto next_property = [&] {
        ++property_;
        parameter_ = 0;
        stage_ = property_ < entities_[entity_].properties.size() ? Stage::Kind : Stage::ConceptKind;
    };

    switch (stage_) {
    case Stage::Entities:
        entity_ = 0;
        stage_ = entities_.empty() ? Stage::Done : Stage::Properties;
        return;
    case Stage::Properties:
        property_ = 0;
        parameter_ = 0;
        stage_ = entities_[entity_].properties.empty() ? Stage::ConceptKind : Stage::Kind;
        return;
    case Stage::Kind: {
        EntityChoice &choice = entities_[entity_];
        const ChangedEntity &entity = diff_.changed[choice.index];
        if (kind_spec(model, entity, choice.properties[property_]).parameters.empty())
            next_property();
        else
            stage_ = Stage::Parameter;
        return;
    }
    case Stage::Parameter: {
        EntityChoice &choice = entities_[entity_];
        const ChangedEntity &entity = diff_.changed[choice.index];
        if (++parameter_ >= kind_spec(model, entity, choice.properties[property_]).parameters.size())
            next_property();
        return;
    }
    case Stage::ConceptKind:
        if (entities_[entity_].concept_kind == "ConceptRange")
            stage_ = Stage::ConceptBase;
        else
            next_entity();
        return;
    case Stage::ConceptBase:
        stage_ = Stage::ConceptInclude;
        return;
    case Stage::ConceptInclude:
        next_entity();
        return;
    case Stage::Done:
        return;
    }
}

Variation Session::property_variation(const Model &model, const ChangedEntity &entity,
                                      const PropertyChoice &choice) const {
    const PropertyChange &change = change_of(entity, choice.property);
    ValueKind domain = domain_of(model, entity, change);
    auto number = [&](const char *name) { return std::get<double>(choice.parameters.at(name)); };
    auto flag = [&](const char *name) { return std::get<bool>(choice.parameters.at(name)); };

    if (choice.kind == "Whole")
        return Variation::whole();
    if (choice.kind == "Fixed") {
        if (domain == ValueKind::Number)
            return Variation::fixed(Value::number(number("value")));
        if (domain == ValueKind::Integer)
            return Variation::fixed(Value::integer(std::llround(number("value"))));
        return Variation::fixed(change.after);
    }
    if (choice.kind == "Interval")
        return Variation::interval(number("lower"), flag("lowerClosed"), number("upper"), flag("upperClosed"));
    if (choice.kind == "Union" || choice.kind == "Intersection")
        return interval_set_variation(choice.kind, std::get<std::string>(choice.parameters.at("intervals")));
    if (choice.kind == "Ball") {
        BallVariation ball;
        if (change.after.kind() == ValueKind::Location) {
            ball.reference = change.after.as_location().reference;
            ball.center = change.after.as_location().delta;
        } else {
            ball.center = change.after.as_pose();
        }
        ball.max_distance = number("maxDistance");
        ball.max_angle = number("maxAngle");
        return ball;
    }
    throw InvalidAnswerError("unknown variation kind '" + choice.kind + "'");
}

Variation Session::assemble(const Model &model) const {
    CollectionSubsetVariation subset;
    for (const auto &choice : entities_) {
        const ChangedEntity &entity = diff_.changed[choice.index];
        InstancePropertiesVariation ipv;
        if (choice.concept_kind == "Fixed")
            ipv.concept_variation = {entity.concept_id, false};
        else if (choice.concept_kind == "Whole")
            ipv.concept_variation = {general_base(model, choice), true};
        else
            ipv.concept_variation = {choice.concept_base, choice.include_subconcepts};
        for (const auto &p : choice.properties)
            ipv.properties.emplace(p.property, property_variation(model, entity, p));
        subset.elements.push_back(std::move(ipv));
    }
    return EnvironmentVariation{std::move(subset)};
}

Session run_script(const Model &model, Session session, const std::map<std::string, Answer> &script,
                   bool use_defaults) {
    while (!session.complete()) {
        const Question &q = *session.pending();
        auto it = script.find(q.id);
        if (it != script.end())
            session = session.answer(model, it->second);
        else if (use_defaults)
            session = session.answer(model, q.default_answer);
        else
            throw InvalidAnswerError("the answer script has no answer for question '" + q.id + "'", q.id);
    }
    return session;
}

}  // namespace goalvar
