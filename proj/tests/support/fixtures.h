#ifndef GOALVAR_TESTS_FIXTURES_H
#define GOALVAR_TESTS_FIXTURES_H

#include "oracles.h"

#include "goalvar/json_io.h"

#include <string>
#include <vector>

namespace fixture {

const goalvar::Model &model();

std::string data_path(const std::string &name);

// Completes defaults, adds the world frame and validates.
goalvar::EnvironmentState environment(const std::vector<goalvar::Instance> &instances);

goalvar::Instance container(const std::string &id, const std::string &concept_id, double level, double volume);

// One element variation over `concept_id` and subconcepts, constraining
// contentLevel to `level`.
goalvar::Variation level_goal(const std::string &concept_id, const goalvar::Variation &level);

goalvar::EnvironmentState environment(const std::vector<oracle::UnitContainer> &containers);

// Sum of contentLevel over every container.
double total_liquid(const goalvar::EnvironmentState &env);

// B 0.08/0.5, M 0.1/1.0, C1 0.1/0.3, C2 0.02/0.3 and the union target
// [0.3, 0.32] u [0.45, 0.5] over LiquidContainer.
goalvar::EnvironmentState three_pour_environment();
goalvar::Variation three_pour_goal();

// The milk-pour demonstration and its scripted answers.
goalvar::EnvironmentState milk_before();
goalvar::EnvironmentState milk_after();
std::map<std::string, goalvar::Answer> milk_script();
// LiquidContainer (with subconcepts) whose contentLevel lies in [0.28, 0.32].
goalvar::Variation milk_goal();

}  // namespace fixture

#endif
