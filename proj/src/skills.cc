#include "goalvar/skills.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace goalvar {

namespace {

using Change = std::pair<std::string, std::string>;  // (instance, property)

bool kind_accepts(ValueKind expected, ValueKind actual) {
    if (expected == actual)
        return true;
    return expected == ValueKind::Number && actual == ValueKind::Integer;
}

void check_expression_params(const SkillTemplate &skill, const Expr &expr, const std::string &path,
                             std::vector<Issue> &issues) {
    std::set<std::string> used;
    collect_params(expr, used);
    for (const auto &name : used)
        if (!skill.find_parameter(name))
            issues.push_back({path, "unknown parameter '" + name + "'"});
}

void check_condition(const SkillTemplate &skill, const Condition &c, const std::string &path,
                     std::vector<Issue> &issues) {
    check_expression_params(skill, *c.lhs, path, issues);
    check_expression_params(skill, *c.rhs, path, issues);
}

Comparison failed_condition(const Condition &c, const ConditionResult &r) {
    Comparison cmp;
    cmp.label = c.text;
    cmp.value = r.lhs;
    cmp.equal = false;
    // Strict comparisons carry the tolerance in their bound so that the
    // recorded predicate re-evaluates to the same verdict.
    Value bound = r.rhs;
    if (c.op == CompareOp::Greater)
        bound = Value::number(r.rhs.as_number() + kEpsilon);
    else if (c.op == CompareOp::Less)
        bound = Value::number(r.rhs.as_number() - kEpsilon);
    cmp.target = bound;
    ReasonKind kind = (c.op == CompareOp::Equal || c.op == CompareOp::NotEqual)
                          ? ReasonKind::ValueMismatch
                          : ReasonKind::BoundViolation;
    cmp.reasons.push_back(
        Reason{kind, Predicate{std::string(predicate_name(c.op)), {r.lhs, bound}, true, false}});
    return cmp;
}

Value coerce(const Value &v, ValueKind domain, const std::string &path) {
    if (v.kind() == domain)
        return v;
    if (domain == ValueKind::Number && is_numeric(v.kind()))
        return Value::number(v.as_number());
    if (domain == ValueKind::Integer && is_numeric(v.kind()))
        return Value::integer(std::llround(v.as_number()));
    throw DomainMismatchError("effect produces " + std::string(to_string(v.kind())) + " for a " +
                                  std::string(to_string(domain)) + " property",
                              path);
}

// Rounding drift from repeated pours must not push a level just outside its
// container.
void clamp_container(Instance &instance) {
    if (!is_container(instance))
        return;
    double level = content_level(instance);
    double volume = content_volume(instance);
    if (level < 0.0 && level >= -kEpsilon)
        instance.values.insert_or_assign(kContentLevel, Value::number(0.0));
    else if (level > volume && level <= volume + kEpsilon)
        instance.values.insert_or_assign(kContentLevel, Value::number(volume));
}

std::vector<Change> snapshot_changes(const EnvironmentState &before, const EnvironmentState &after) {
    std::vector<Change> out;
    for (const auto &[id, b] : before.instances()) {
        const Instance *a = after.find(id);
        if (!a)
            continue;
        for (const auto &[name, value] : a->values) {
            auto it = b.values.find(name);
            if (it != b.values.end() && !values_equal(it->second, value))
                out.emplace_back(id, name);
        }
    }
    return out;
}

struct Candidate {
    SkillInstance skill;
    std::set<Change> consumed;
};

class Recognizer {
public:
    Recognizer(const Ontology &ontology, const SkillRegistry &registry, const EnvironmentState &before,
               const EnvironmentState &after, const std::vector<Change> &changes)
        : ontology_(ontology), registry_(registry), before_(before), after_(after),
          changes_(changes.begin(), changes.end()) {
        for (const auto &c : changes)
            if (std::find(changed_.begin(), changed_.end(), c.first) == changed_.end())
                changed_.push_back(c.first);
    }

    std::vector<Candidate> candidates() {
        std::vector<Candidate> out;
        for (const auto &skill : registry_.skills()) {
            std::vector<const ParameterDef *> refs;
            for (const auto &p : skill.parameters)
                if (p.kind == ValueKind::InstanceRef)
                    refs.push_back(&p);
            std::map<std::string, Value> bindings;
            std::set<std::string> used;
            enumerate(skill, refs, 0, bindings, used, out);
        }
        return out;
    }

private:
    void enumerate(const SkillTemplate &skill, const std::vector<const ParameterDef *> &refs,
                   std::size_t index, std::map<std::string, Value> &bindings,
                   std::set<std::string> &used, std::vector<Candidate> &out) {
        if (index == refs.size()) {
            if (auto c = complete(skill, bindings))
                out.push_back(std::move(*c));
            return;
        }
        const ParameterDef &param = *refs[index];
        for (const auto &id : changed_) {
            if (used.count(id))
                continue;
            const Instance *instance = after_.find(id);
            if (param.concept_id && !ontology_.is_subconcept(instance->concept_id, *param.concept_id))
                continue;
            bindings[param.name] = Value::instance_ref(id);
            used.insert(id);
            enumerate(skill, refs, index + 1, bindings, used, out);
            used.erase(id);
            bindings.erase(param.name);
        }
    }

    // f(x) = lhs - rhs with `param` bound to x; nullopt if not numeric.
    std::optional<double> residual(const Condition &check, std::map<std::string, Value> &bindings,
                                   const std::string &param, double x) const {
        bindings[param] = Value::number(x);
        EvalContext ctx{&bindings, &after_, &before_};
        try {
            Value l = evaluate(*check.lhs, ctx);
            Value r = evaluate(*check.rhs, ctx);
            if (!is_numeric(l.kind()) || !is_numeric(r.kind()))
                return std::nullopt;
            return l.as_number() - r.as_number();
        } catch (const Error &) {
            return std::nullopt;
        }
    }

    // Solves each unbound numeric parameter from an equality check that is
    // linear in it and mentions no other unbound parameter.
    bool solve_numeric(const SkillTemplate &skill, std::map<std::string, Value> &bindings) const {
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto &check : skill.checks) {
                if (check.op != CompareOp::Equal)
                    continue;
                std::set<std::string> params;
                collect_params(*check.lhs, params);
                collect_params(*check.rhs, params);
                std::vector<std::string> unbound;
                for (const auto &p : params)
                    if (!bindings.count(p))
                        unbound.push_back(p);
                if (unbound.size() != 1)
                    continue;
                const ParameterDef *def = skill.find_parameter(unbound[0]);
                if (!def || !is_numeric(def->kind))
                    continue;
                auto f0 = residual(check, bindings, unbound[0], 0.0);
                auto f1 = residual(check, bindings, unbound[0], 1.0);
                bindings.erase(unbound[0]);
                if (!f0 || !f1 || std::fabs(*f1 - *f0) < 1e-12)
                    continue;
                double x = -*f0 / (*f1 - *f0);
                bindings[unbound[0]] = def->kind == ValueKind::Integer
                                           ? Value::integer(std::llround(x))
                                           : Value::number(x);
                progress = true;
            }
        }
        for (const auto &p : skill.parameters)
            if (!bindings.count(p.name))
                return false;
        return true;
    }

    std::optional<Candidate> complete(const SkillTemplate &skill,
                                      std::map<std::string, Value> bindings) const {
        if (!solve_numeric(skill, bindings))
            return std::nullopt;
        EvalContext ctx{&bindings, &after_, &before_};
        std::set<Change> consumed;
        for (const auto &check : skill.checks) {
            try {
                if (!evaluate(check, ctx, kMatchTolerance).holds)
                    return std::nullopt;
            } catch (const Error &) {
                return std::nullopt;
            }
            std::set<std::pair<std::string, std::string>> reads;
            collect_snapshot_reads(*check.lhs, reads);
            collect_snapshot_reads(*check.rhs, reads);
            for (const auto &[param, property] : reads) {
                Change change{bindings.at(param).as_instance_ref(), property};
                if (changes_.count(change))
                    consumed.insert(std::move(change));
            }
        }
        if (consumed.empty())
            return std::nullopt;
        try {
            return Candidate{registry_.instantiate(skill.id, std::move(bindings)), std::move(consumed)};
        } catch (const Error &) {
            return std::nullopt;
        }
    }

    const Ontology &ontology_;
    const SkillRegistry &registry_;
    const EnvironmentState &before_;
    const EnvironmentState &after_;
    std::set<Change> changes_;
    std::vector<std::string> changed_;  // instance ids, id order
};

}  // namespace

const ParameterDef *SkillTemplate::find_parameter(const std::string &name) const {
    for (const auto &p : parameters)
        if (p.name == name)
            return &p;
    return nullptr;
}

void SkillRegistry::add_action(const Ontology &ontology, ActionTemplate action) {
    std::vector<Issue> issues;
    const std::string path = "actions." + action.id;
    if (action.id.empty())
        issues.push_back({"actions", "action id must not be empty"});
    if (find_action(action.id))
        issues.push_back({path, "duplicate action '" + action.id + "'"});
    for (const auto &affected : action.affected_properties) {
        if (!ontology.has_concept(affected.concept_id))
            issues.push_back({path, "unknown concept '" + affected.concept_id + "'"});
        else if (!ontology.find_property(affected.concept_id, affected.property))
            issues.push_back({path, "concept '" + affected.concept_id + "' has no property '" +
                                        affected.property + "'"});
    }
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    actions_.push_back(std::move(action));
}

void SkillRegistry::add_skill(const Ontology &ontology, SkillTemplate skill) {
    std::vector<Issue> issues;
    const std::string path = "skills." + skill.id;
    if (skill.id.empty())
        issues.push_back({"skills", "skill id must not be empty"});
    if (find_skill(skill.id))
        issues.push_back({path, "duplicate skill '" + skill.id + "'"});

    std::set<std::string> names;
    for (const auto &p : skill.parameters) {
        if (!names.insert(p.name).second)
            issues.push_back({path + ".parameters." + p.name, "duplicate parameter"});
        if (p.concept_id && !ontology.has_concept(*p.concept_id))
            issues.push_back({path + ".parameters." + p.name, "unknown concept '" + *p.concept_id + "'"});
    }
    for (std::size_t i = 0; i < skill.preconditions.size(); ++i)
        check_condition(skill, skill.preconditions[i], path + ".preconditions[" + std::to_string(i) + "]",
                        issues);
    for (std::size_t i = 0; i < skill.checks.size(); ++i)
        check_condition(skill, skill.checks[i], path + ".checks[" + std::to_string(i) + "]", issues);
    if (skill.duration)
        check_expression_params(skill, *skill.duration, path + ".duration", issues);

    for (std::size_t i = 0; i < skill.effects.size(); ++i) {
        const Effect &e = skill.effects[i];
        std::string epath = path + ".effects[" + std::to_string(i) + "]";
        check_expression_params(skill, *e.value, epath, issues);
        const ParameterDef *p = skill.find_parameter(e.param);
        if (!p || p->kind != ValueKind::InstanceRef || !p->concept_id) {
            issues.push_back({epath, "effect target '" + e.param +
                                         "' is not an instance parameter with a concept"});
            continue;
        }
        if (ontology.has_concept(*p->concept_id) && !ontology.find_property(*p->concept_id, e.property))
            issues.push_back({epath, "concept '" + *p->concept_id + "' has no property '" + e.property + "'"});
    }

    for (const auto &action_id : skill.implements) {
        const ActionTemplate *action = find_action(action_id);
        if (!action) {
            issues.push_back({path + ".implements", "unknown action '" + action_id + "'"});
            continue;
        }
        for (const auto &affected : action->affected_properties) {
            bool covered = std::any_of(skill.effects.begin(), skill.effects.end(), [&](const Effect &e) {
                const ParameterDef *p = skill.find_parameter(e.param);
                if (!p || !p->concept_id || e.property != affected.property)
                    return false;
                return ontology.is_subconcept(*p->concept_id, affected.concept_id) ||
                       ontology.is_subconcept(affected.concept_id, *p->concept_id);
            });
            if (!covered)
                issues.push_back({path + ".effects", "no effect covers " + affected.concept_id + "." +
                                                         affected.property + " of action '" +
                                                         action_id + "'"});
        }
    }
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    skills_.push_back(std::move(skill));
}

const ActionTemplate *SkillRegistry::find_action(const std::string &id) const {
    for (const auto &a : actions_)
        if (a.id == id)
            return &a;
    return nullptr;
}

const SkillTemplate *SkillRegistry::find_skill(const std::string &id) const {
    for (const auto &s : skills_)
        if (s.id == id)
            return &s;
    return nullptr;
}

const SkillTemplate &SkillRegistry::skill(const std::string &id) const {
    const SkillTemplate *s = find_skill(id);
    if (!s)
        throw UnknownSkillError("unknown skill '" + id + "'", id);
    return *s;
}

std::vector<const SkillTemplate *> SkillRegistry::skills_implementing(const std::string &action_id) const {
    std::vector<const SkillTemplate *> out;
    for (const auto &s : skills_)
        if (std::find(s.implements.begin(), s.implements.end(), action_id) != s.implements.end())
            out.push_back(&s);
    return out;
}

SkillInstance SkillRegistry::instantiate(const std::string &skill_id,
                                         std::map<std::string, Value> bindings) const {
    const SkillTemplate &t = skill(skill_id);
    std::vector<Issue> issues;
    for (const auto &p : t.parameters) {
        auto it = bindings.find(p.name);
        if (it == bindings.end()) {
            issues.push_back({p.name, "missing binding for parameter '" + p.name + "'"});
            continue;
        }
        if (!kind_accepts(p.kind, it->second.kind()))
            issues.push_back({p.name, "parameter '" + p.name + "' expects " +
                                          std::string(to_string(p.kind)) + ", got " +
                                          std::string(to_string(it->second.kind()))});
    }
    for (const auto &[name, value] : bindings)
        if (!t.find_parameter(name))
            issues.push_back({name, "skill '" + skill_id + "' has no parameter '" + name + "'"});
    if (!issues.empty())
        throw ValidationError(std::move(issues));

    SkillInstance out{skill_id, std::move(bindings), 0.0};
    if (t.duration) {
        EvalContext ctx{&out.bindings, nullptr, nullptr};
        out.duration = evaluate(*t.duration, ctx).as_number();
    }
    return out;
}

std::vector<const ActionTemplate *> actions_for_property(const Ontology &ontology,
                                                         const SkillRegistry &registry,
                                                         const std::string &concept_id,
                                                         const std::string &property) {
    std::vector<const ActionTemplate *> out;
    for (const auto &action : registry.actions()) {
        bool match = std::any_of(action.affected_properties.begin(), action.affected_properties.end(),
                                 [&](const AffectedProperty &a) {
                                     return a.property == property &&
                                            ontology.is_subconcept(concept_id, a.concept_id);
                                 });
        if (match)
            out.push_back(&action);
    }
    return out;
}

std::vector<Comparison> check_preconditions(const Ontology &ontology, const SkillRegistry &registry,
                                            const SkillInstance &skill, const EnvironmentState &env) {
    const SkillTemplate &t = registry.skill(skill.skill);
    std::vector<Comparison> failures;
    for (const auto &p : t.parameters) {
        if (p.kind != ValueKind::InstanceRef)
            continue;
        auto it = skill.bindings.find(p.name);
        if (it == skill.bindings.end())
            throw ValidationError({{p.name, "missing binding for parameter '" + p.name + "'"}});
        const std::string &id = it->second.as_instance_ref();
        const Instance *instance = env.find(id);
        if (!instance)
            throw UnknownInstanceError("unknown instance '" + id + "'", id);
        if (p.concept_id && !ontology.is_subconcept(instance->concept_id, *p.concept_id)) {
            Comparison cmp;
            cmp.label = p.name;
            cmp.value = Value::concept_ref(instance->concept_id);
            cmp.target = Variation(ConceptVariation{*p.concept_id, true});
            cmp.equal = false;
            cmp.reasons.push_back(Reason{ReasonKind::ConceptMismatch,
                                         Predicate{"IsSubconcept",
                                                   {Value::concept_ref(instance->concept_id),
                                                    Value::concept_ref(*p.concept_id)},
                                                   true,
                                                   false}});
            failures.push_back(std::move(cmp));
        }
    }
    if (!failures.empty())
        return failures;

    EvalContext ctx{&skill.bindings, &env, nullptr};
    for (const auto &c : t.preconditions) {
        ConditionResult r = evaluate(c, ctx, kEpsilon);
        if (!r.holds)
            failures.push_back(failed_condition(c, r));
    }
    return failures;
}

EnvironmentState apply_effects(const Ontology &ontology, const SkillRegistry &registry,
                               const SkillInstance &skill, const EnvironmentState &env) {
    auto failures = check_preconditions(ontology, registry, skill, env);
    if (!failures.empty())
        throw PreconditionViolatedError("precondition '" + failures.front().label + "' of " +
                                            skill.skill + " does not hold",
                                        skill.skill);

    const SkillTemplate &t = registry.skill(skill.skill);
    EvalContext ctx{&skill.bindings, &env, nullptr};

    // Every right-hand side reads the state before the skill.
    std::map<std::string, Instance> touched;
    for (const auto &e : t.effects) {
        const std::string &id = skill.bindings.at(e.param).as_instance_ref();
        std::string path = id + "." + e.property;
        auto [slot, fresh] = touched.try_emplace(id);
        if (fresh)
            slot->second = *env.find(id);
        Instance &instance = slot->second;

        const PropertyDef *def = ontology.find_property(instance.concept_id, e.property);
        if (!def)
            throw UnknownPropertyError("concept '" + instance.concept_id + "' has no property '" +
                                           e.property + "'",
                                       path);
        Value rhs = evaluate(*e.value, ctx);
        Value result;
        if (e.op == EffectOp::Assign) {
            result = rhs;
        } else {
            double current = get_value(env, id, e.property).as_number();
            auto it = instance.values.find(e.property);
            if (it != instance.values.end())
                current = it->second.as_number();
            double delta = rhs.as_number();
            result = Value::number(e.op == EffectOp::Add ? current + delta : current - delta);
        }
        instance.values.insert_or_assign(e.property, coerce(result, def->domain, path));
    }

    EnvironmentState out = env;
    for (auto &[id, instance] : touched) {
        clamp_container(instance);
        if (is_container(instance)) {
            double level = content_level(instance);
            if (level < -kEpsilon || level > content_volume(instance) + kEpsilon)
                throw InvariantViolationError("effects of " + skill.skill + " leave " + id +
                                                  " outside its content bounds",
                                              id + "." + kContentLevel);
        }
        out = out.with(std::move(instance));
    }
    return out;
}

Recognition recognize_skills(const Ontology &ontology, const SkillRegistry &registry,
                             const std::vector<EnvironmentState> &snapshots) {
    Recognition out;
    for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
        const EnvironmentState &before = snapshots[i];
        const EnvironmentState &after = snapshots[i + 1];
        std::vector<Change> changes = snapshot_changes(before, after);
        if (changes.empty())
            continue;

        std::vector<Candidate> candidates = Recognizer(ontology, registry, before, after, changes).candidates();
        std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
            return a.consumed.size() > b.consumed.size();
        });

        std::set<Change> explained;
        for (auto &c : candidates) {
            bool free = std::none_of(c.consumed.begin(), c.consumed.end(),
                                     [&](const Change &ch) { return explained.count(ch) > 0; });
            if (!free)
                continue;
            explained.insert(c.consumed.begin(), c.consumed.end());
            out.skills.push_back({i, i + 1, std::move(c.skill)});
        }

        for (const auto &[id, property] : changes) {
            if (explained.count({id, property}))
                continue;
            const Instance &instance = *after.find(id);
            Value was = before.find(id)->values.at(property);
            Value now = instance.values.at(property);
            Variation target = Variation::fixed(now);
            Comparison cmp;
            try {
                cmp = compare_to_variation(ontology, was, target, property);
            } catch (const DomainMismatchError &) {
                cmp = compare_values(was, now, property);
            }
            out.residuals.push_back(
                {i, i + 1, PropertyDifference{id, instance.concept_id, property, was, target, std::move(cmp)}});
        }
    }
    return out;
}

}  // namespace goalvar
