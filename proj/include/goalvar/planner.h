#ifndef GOALVAR_PLANNER_H
#define GOALVAR_PLANNER_H

#include "goalvar/matching.h"
#include "goalvar/model.h"
#include "goalvar/variation.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace goalvar {

struct ExecutionPlan;

struct SkillAlternative {
    SkillInstance skill;
    // Plan establishing the skill's preconditions, when it has one.
    std::shared_ptr<const ExecutionPlan> precondition_plan;
};

// Interchangeable ways to perform one step; executed in order of preference.
struct SkillAlternativeSet {
    std::vector<SkillAlternative> alternatives;
};

// An empty plan means the goal already holds.
struct ExecutionPlan {
    std::vector<SkillAlternativeSet> steps;

    bool empty() const { return steps.empty(); }
    // Skills along the first-alternative chain, nested plans included.
    std::size_t step_count() const;
    // The first-alternative chain, flattened in execution order.
    std::vector<SkillInstance> skills() const;
};

ExecutionPlan concatenate(const std::vector<const ExecutionPlan *> &plans);

// Brings `entity`'s contentLevel into `target` by pouring from or into the
// other containers. Returns nullopt when no solution exists.
std::optional<ExecutionPlan> solve_content_level(const Model &model, const EnvironmentState &env,
                                                 const std::string &entity, const Variation &target);

enum class CellStatus { AlreadySatisfied, Planned, NoSolution };

std::string_view to_string(CellStatus status);

struct SolutionCell {
    std::size_t row = 0;
    std::string candidate;
    CellStatus status = CellStatus::NoSolution;
    ExecutionPlan plan;
    std::vector<PropertyDifference> differences;
    // Why the cell has no solution, for explanations.
    std::string note;

    std::optional<std::size_t> cost() const;
};

struct SolutionMatrix {
    std::vector<std::size_t> rows;        // element-variation indices
    std::vector<std::string> columns;     // candidate instance ids, sorted
    std::vector<SolutionCell> cells;      // row-major, only concept-compatible pairs

    const SolutionCell *find(std::size_t row, const std::string &candidate) const;
};

SolutionMatrix build_matrix(const Model &model, const EnvironmentComparison &comparison,
                            const EnvironmentState &env);

struct Assignment {
    std::map<std::size_t, std::size_t> pairs;  // row -> column
    std::size_t total_cost = 0;
};

// Maximum-cardinality assignment of rows to distinct columns over finite
// costs, then minimum total cost, then the lexicographically smallest
// (row, column) sequence.
Assignment select_assignment(const std::vector<std::vector<std::optional<std::size_t>>> &costs);

struct PlanResult {
    bool satisfiable = false;
    // Element-variation index -> instance id. Partial when unsatisfiable.
    std::map<std::size_t, std::string> assignment;
    // Concatenation of the assigned cells' plans; empty when unsatisfiable.
    ExecutionPlan plan;
    std::size_t total_cost = 0;
    SolutionMatrix matrix;
};

PlanResult select_solutions(const SolutionMatrix &matrix);

// compare_environment, build_matrix and select_solutions. `goal` must be an
// EnvironmentVariation.
PlanResult plan(const Model &model, const EnvironmentState &env, const Variation &goal);

}  // namespace goalvar

#endif
