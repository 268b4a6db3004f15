#include "goalvar/executor.h"

#include "goalvar/json_io.h"

#include <cstdio>

namespace goalvar {

namespace {

struct Run {
    const Model &model;
    EnvironmentState env;
    std::vector<TraceEntry> entries;
    double duration = 0.0;
    std::optional<SkillInstance> failed_skill;
    std::vector<Comparison> failures;
};

bool run_plan(Run &run, const ExecutionPlan &plan);

// Tries one alternative on a scratch copy so a failed nested plan leaves no
// trace behind.
bool try_alternative(Run &run, const SkillAlternative &alt, std::vector<Comparison> &failures) {
    Run scratch{run.model, run.env, {}, 0.0, {}, {}};
    if (alt.precondition_plan && !run_plan(scratch, *alt.precondition_plan))
        return false;
    failures = check_preconditions(run.model.ontology, run.model.skills, alt.skill, scratch.env);
    if (!failures.empty())
        return false;

    TraceEntry entry;
    entry.skill = alt.skill;
    entry.pre_digest = state_digest(scratch.env);
    scratch.env = apply_effects(run.model.ontology, run.model.skills, alt.skill, scratch.env);
    entry.post_digest = state_digest(scratch.env);
    entry.duration = alt.skill.duration;
    scratch.entries.push_back(std::move(entry));
    scratch.duration += alt.skill.duration;

    run.env = std::move(scratch.env);
    run.entries.insert(run.entries.end(), scratch.entries.begin(), scratch.entries.end());
    run.duration += scratch.duration;
    return true;
}

bool run_plan(Run &run, const ExecutionPlan &plan) {
    for (const auto &step : plan.steps) {
        std::vector<Comparison> first_failures;
        bool done = false;
        for (std::size_t i = 0; i < step.alternatives.size() && !done; ++i) {
            std::vector<Comparison> failures;
            done = try_alternative(run, step.alternatives[i], failures);
            if (!done && i == 0)
                first_failures = std::move(failures);
        }
        if (done)
            continue;
        if (!step.alternatives.empty())
            run.failed_skill = step.alternatives.front().skill;
        run.failures = std::move(first_failures);
        return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Satisfied:
        return "Satisfied";
    case Verdict::NotSatisfied:
        return "NotSatisfied";
    case Verdict::Unchecked:
        return "Unchecked";
    }
    return "";
}

std::string state_digest(const EnvironmentState &env) {
    std::string text = to_json(env).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

ExecutionTrace execute(const Model &model, const ExecutionPlan &plan, const EnvironmentState &env,
                       const std::optional<Variation> &goal) {
    Run run{model, env, {}, 0.0, {}, {}};
    bool completed = run_plan(run, plan);

    ExecutionTrace trace;
    trace.entries = std::move(run.entries);
    trace.final_env = std::move(run.env);
    trace.total_duration = run.duration;
    trace.aborted = !completed;
    trace.failed_skill = std::move(run.failed_skill);
    trace.failures = std::move(run.failures);

    bool reached = false;
    if (goal) {
        const auto *ev = goal->get_if<EnvironmentVariation>();
        if (!ev)
            throw DomainMismatchError("a goal must be an EnvironmentDataRangeEntityVariation, got " +
                                          std::string(type_name(*goal)),
                                      "variation");
        trace.goal_comparison = compare_environment(model.ontology, trace.final_env, *ev);
        reached = trace.goal_comparison->match.satisfied;
    }
    if (!completed)
        trace.verdict = Verdict::NotSatisfied;
    else if (goal)
        trace.verdict = reached ? Verdict::Satisfied : Verdict::NotSatisfied;
    else
        trace.verdict = Verdict::Unchecked;
    return trace;
}

}  // namespace goalvar
