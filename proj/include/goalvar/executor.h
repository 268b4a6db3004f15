#ifndef GOALVAR_EXECUTOR_H
#define GOALVAR_EXECUTOR_H

#include "goalvar/matching.h"
#include "goalvar/planner.h"

#include <optional>
#include <string>
#include <vector>

namespace goalvar {

enum class Verdict { Satisfied, NotSatisfied, Unchecked };

std::string_view to_string(Verdict verdict);

struct TraceEntry {
    SkillInstance skill;
    std::string pre_digest;
    std::string post_digest;
    double duration = 0.0;
    bool preconditions_passed = true;
};

struct ExecutionTrace {
    // One per executed skill.
    std::vector<TraceEntry> entries;
    EnvironmentState final_env;
    Verdict verdict = Verdict::Unchecked;
    bool aborted = false;
    // When aborted: the skill no alternative could replace and its failing
    // preconditions.
    std::optional<SkillInstance> failed_skill;
    std::vector<Comparison> failures;
    // Present whenever a goal was given.
    std::optional<EnvironmentComparison> goal_comparison;
    double total_duration = 0.0;
};

// Digest of an environment's canonical document (FNV-1a, 64 bit, hex).
std::string state_digest(const EnvironmentState &env);

// Runs `plan` on a copy of `env`. At every step the first alternative whose
// preconditions hold (after its nested plan, if any) is applied; when none
// can run, execution stops with a NotSatisfied verdict.
ExecutionTrace execute(const Model &model, const ExecutionPlan &plan, const EnvironmentState &env,
                       const std::optional<Variation> &goal = std::nullopt);

}  // namespace goalvar

#endif
