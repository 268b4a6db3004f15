#include "goalvar/planner.h"

#include <algorithm>
#include <functional>

namespace goalvar {

namespace {

// Skills that move contents between two containers: source, dest, amount.
std::vector<const SkillTemplate *> transfer_skills(const Model &model, const std::string &concept_id) {
    std::vector<const SkillTemplate *> out;
    for (const ActionTemplate *action : actions_for_property(model.ontology, model.skills, concept_id, kContentLevel))
        for (const SkillTemplate *skill : model.skills.skills_implementing(action->id))
            if (skill->parameters.size() == 3 && skill->find_parameter("source") &&
                skill->find_parameter("dest") && skill->find_parameter("amount") &&
                std::find(out.begin(), out.end(), skill) == out.end())
                out.push_back(skill);
    return out;
}

struct Other {
    std::string id;
    double volume;
};

std::optional<ExecutionPlan> solve_for(const Model &model, const EnvironmentState &env,
                                       const std::string &entity, const Variation &target, double goal,
                                       const std::vector<const SkillTemplate *> &skills) {
    const Instance &self = *env.find(entity);
    double current = content_level(self);
    const bool filling = current <= goal;

    std::vector<Other> others;
    for (const auto &[id, instance] : env.instances())
        if (id != entity && is_container(instance))
            others.push_back({id, content_volume(instance)});
    std::sort(others.begin(), others.end(), [&](const Other &a, const Other &b) {
        if (a.volume != b.volume)
            return filling ? a.volume < b.volume : a.volume > b.volume;
        return a.id < b.id;
    });

    ExecutionPlan plan;
    EnvironmentState sim = env;
    for (const auto &other : others) {
        if (contains(model.ontology, target, Value::number(current)))
            break;
        const Instance &c = *sim.find(other.id);
        double amount = filling ? std::min(content_level(c), goal - current)
                                : std::min(current - goal, content_volume(c) - content_level(c));
        if (amount <= kEpsilon)
            continue;
        std::map<std::string, Value> bindings{
            {"source", Value::instance_ref(filling ? other.id : entity)},
            {"dest", Value::instance_ref(filling ? entity : other.id)},
            {"amount", Value::number(amount)},
        };
        for (const SkillTemplate *skill : skills) {
            SkillInstance instance = model.skills.instantiate(skill->id, bindings);
            if (!check_preconditions(model.ontology, model.skills, instance, sim).empty())
                continue;
            sim = apply_effects(model.ontology, model.skills, instance, sim);
            current = content_level(*sim.find(entity));
            plan.steps.push_back({{SkillAlternative{std::move(instance), nullptr}}});
            break;
        }
    }
    if (!contains(model.ontology, target, Value::number(current)))
        return std::nullopt;
    return plan;
}

}  // namespace

std::size_t ExecutionPlan::step_count() const {
    std::size_t n = 0;
    for (const auto &step : steps) {
        if (step.alternatives.empty())
            continue;
        ++n;
        if (const auto &nested = step.alternatives.front().precondition_plan)
            n += nested->step_count();
    }
    return n;
}

std::vector<SkillInstance> ExecutionPlan::skills() const {
    std::vector<SkillInstance> out;
    for (const auto &step : steps) {
        if (step.alternatives.empty())
            continue;
        const SkillAlternative &alt = step.alternatives.front();
        if (alt.precondition_plan) {
            auto nested = alt.precondition_plan->skills();
            out.insert(out.end(), nested.begin(), nested.end());
        }
        out.push_back(alt.skill);
    }
    return out;
}

ExecutionPlan concatenate(const std::vector<const ExecutionPlan *> &plans) {
    ExecutionPlan out;
    for (const ExecutionPlan *p : plans)
        out.steps.insert(out.steps.end(), p->steps.begin(), p->steps.end());
    return out;
}

std::optional<ExecutionPlan> solve_content_level(const Model &model, const EnvironmentState &env,
                                                 const std::string &entity, const Variation &target) {
    const Instance *self = env.find(entity);
    if (!self)
        throw UnknownInstanceError("unknown instance '" + entity + "'", entity);
    if (!is_container(*self))
        throw DomainMismatchError("instance '" + entity + "' has no content level", entity);

    double current = content_level(*self);
    if (contains(model.ontology, target, Value::number(current)))
        return ExecutionPlan{};

    auto skills = transfer_skills(model, self->concept_id);
    if (skills.empty())
        return std::nullopt;

    std::vector<double> goals;
    try {
        goals = nearest_targets(target, current);
    } catch (const EmptyVariationError &) {
        return std::nullopt;
    }
    double volume = content_volume(*self);
    for (double goal : goals) {
        if (goal > volume + kEpsilon || goal < -kEpsilon)
            continue;
        if (auto p = solve_for(model, env, entity, target, goal, skills))
            return p;
    }
    return std::nullopt;
}

std::string_view to_string(CellStatus status) {
    switch (status) {
    case CellStatus::AlreadySatisfied:
        return "AlreadySatisfied";
    case CellStatus::Planned:
        return "Planned";
    case CellStatus::NoSolution:
        return "NoSolution";
    }
    return "";
}

std::optional<std::size_t> SolutionCell::cost() const {
    switch (status) {
    case CellStatus::AlreadySatisfied:
        return 0;
    case CellStatus::Planned:
        return plan.step_count();
    default:
        return std::nullopt;
    }
}

const SolutionCell *SolutionMatrix::find(std::size_t row, const std::string &candidate) const {
    for (const auto &cell : cells)
        if (cell.row == row && cell.candidate == candidate)
            return &cell;
    return nullptr;
}

SolutionMatrix build_matrix(const Model &model, const EnvironmentComparison &comparison,
                            const EnvironmentState &env) {
    SolutionMatrix matrix;
    std::vector<std::string> columns;
    for (const auto &element : comparison.elements) {
        matrix.rows.push_back(element.index);
        for (const auto &candidate : element.candidates) {
            columns.push_back(candidate.instance);
            SolutionCell cell;
            cell.row = element.index;
            cell.candidate = candidate.instance;
            cell.differences = candidate.differences;
            if (candidate.member) {
                cell.status = CellStatus::AlreadySatisfied;
                matrix.cells.push_back(std::move(cell));
                continue;
            }
            if (candidate.differences.empty()) {
                cell.note = "instance lacks a constrained property";
                matrix.cells.push_back(std::move(cell));
                continue;
            }

            std::vector<ExecutionPlan> parts;
            bool solved = true;
            for (const auto &diff : candidate.differences) {
                auto actions = actions_for_property(model.ontology, model.skills, diff.concept_id, diff.property);
                if (actions.empty()) {
                    cell.note = "no action changes " + diff.concept_id + "." + diff.property;
                    solved = false;
                    break;
                }
                if (diff.property != kContentLevel) {
                    cell.note = "no solver for property '" + diff.property + "'";
                    solved = false;
                    break;
                }
                auto part = solve_content_level(model, env, diff.instance, diff.target);
                if (!part) {
                    cell.note = "content level of " + diff.instance + " cannot be brought into the " +
                                std::string(type_name(diff.target)) + " target";
                    solved = false;
                    break;
                }
                parts.push_back(std::move(*part));
            }
            if (solved) {
                std::vector<const ExecutionPlan *> ptrs;
                for (const auto &p : parts)
                    ptrs.push_back(&p);
                cell.plan = concatenate(ptrs);
                cell.status = CellStatus::Planned;
            }
            matrix.cells.push_back(std::move(cell));
        }
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    matrix.columns = std::move(columns);
    return matrix;
}

Assignment select_assignment(const std::vector<std::vector<std::optional<std::size_t>>> &costs) {
    const std::size_t rows = costs.size();
    std::size_t cols = 0;
    for (const auto &r : costs)
        cols = std::max(cols, r.size());

    Assignment best;
    std::size_t best_count = 0;
    bool found = false;

    std::vector<int> chosen(rows, -1);
    std::vector<bool> used(cols, false);

    // Columns in index order and "unassigned" last enumerate assignments in
    // lexicographic order, so only strict improvements replace the best.
    std::function<void(std::size_t, std::size_t, std::size_t)> search = [&](std::size_t row, std::size_t count,
                                                                           std::size_t cost) {
        std::size_t reachable = count + (rows - row);
        if (found && (reachable < best_count || (reachable == best_count && cost >= best.total_cost)))
            return;
        if (row == rows) {
            best.pairs.clear();
            for (std::size_t r = 0; r < rows; ++r)
                if (chosen[r] >= 0)
                    best.pairs.emplace(r, static_cast<std::size_t>(chosen[r]));
            best.total_cost = cost;
            best_count = count;
            found = true;
            return;
        }
        for (std::size_t c = 0; c < costs[row].size(); ++c) {
            if (used[c] || !costs[row][c])
                continue;
            used[c] = true;
            chosen[row] = static_cast<int>(c);
            search(row + 1, count + 1, cost + *costs[row][c]);
            chosen[row] = -1;
            used[c] = false;
        }
        search(row + 1, count, cost);
    };
    search(0, 0, 0);
    return best;
}

PlanResult select_solutions(const SolutionMatrix &matrix) {
    std::vector<std::vector<std::optional<std::size_t>>> costs(
        matrix.rows.size(), std::vector<std::optional<std::size_t>>(matrix.columns.size()));
    for (std::size_t r = 0; r < matrix.rows.size(); ++r)
        for (std::size_t c = 0; c < matrix.columns.size(); ++c)
            if (const SolutionCell *cell = matrix.find(matrix.rows[r], matrix.columns[c]))
                costs[r][c] = cell->cost();

    Assignment a = select_assignment(costs);
    PlanResult result;
    result.matrix = matrix;
    result.satisfiable = a.pairs.size() == matrix.rows.size();
    std::vector<const ExecutionPlan *> plans;
    for (const auto &[r, c] : a.pairs) {
        result.assignment.emplace(matrix.rows[r], matrix.columns[c]);
        plans.push_back(&matrix.find(matrix.rows[r], matrix.columns[c])->plan);
    }
    if (result.satisfiable) {
        result.plan = concatenate(plans);
        result.total_cost = a.total_cost;
    }
    return result;
}

PlanResult plan(const Model &model, const EnvironmentState &env, const Variation &goal) {
    const auto *ev = goal.get_if<EnvironmentVariation>();
    if (!ev)
        throw DomainMismatchError("a goal must be an EnvironmentDataRangeEntityVariation, got " +
                                      std::string(type_name(goal)),
                                  "variation");
    validate(model.ontology, goal, ValueKind::Environment);
    EnvironmentComparison comparison = compare_environment(model.ontology, env, *ev);
    return select_solutions(build_matrix(model, comparison, env));
}

}  // namespace goalvar
