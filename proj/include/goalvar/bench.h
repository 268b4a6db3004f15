#ifndef GOALVAR_BENCH_H
#define GOALVAR_BENCH_H

#include "goalvar/json_io.h"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Content-level planning grid. A scenario fixes three criteria:
//   C1  target variation kind: 1 fixed, 2 interval, 3 interval union
//   C2  target t relative to the target container's level cL and volume cV:
//       1 t < cL <= cV, 2 cL < t < cV, 3 cL < t <= cV with cV in t,
//       4 cL <= cV < t
//   C3  achievable in the environment: 1 yes, 2 no
// C2.4 with C3.1 cannot occur (no container holds more than its volume) and
// is rejected when a config asks for it.

namespace goalvar {

struct BenchContainer {
    std::string id;
    std::string concept_id;
    double volume = 0.0;
};

struct BenchScenario {
    std::string name;
    int c1 = 1;
    int c2 = 1;
    int c3 = 1;
    std::map<std::string, double> levels;  // container id -> contentLevel
    Variation target;                      // over contentLevel

    bool expected_satisfiable() const { return c3 == 1; }
};

struct BenchConfig {
    std::vector<BenchContainer> containers;
    // The container the criteria describe and the concept the goal names.
    std::string target;
    std::string goal_concept;
    std::vector<BenchScenario> scenarios;
};

// {"containers": [{"id", "concept", "contentVolume"}], "target", "goalConcept",
//  "scenarios": [{"name"?, "c1", "c2", "c3", "levels": {id: L}, "variation"}]}
// where c1 is "fixed" | "interval" | "interval-union", c2 is 1..4 and c3 is
// "yes" | "no". Throws ValidationError when a scenario's variation or levels
// contradict its criteria.
BenchConfig bench_config_from_json(const Ontology &ontology, const Json &doc);

EnvironmentState scenario_environment(const Ontology &ontology, const BenchConfig &config,
                                      const BenchScenario &scenario);
// One element variation: {goalConcept and subconcepts, contentLevel in target}.
Variation scenario_goal(const BenchConfig &config, const BenchScenario &scenario);

struct BenchRow {
    std::size_t index = 0;
    std::string name;
    int c1 = 1;
    int c2 = 1;
    int c3 = 1;
    bool expected = false;
    bool satisfiable = false;
    std::size_t steps = 0;
    // Execution of the selected plan; Unchecked when nothing was planned.
    Verdict verdict = Verdict::Unchecked;
    double mean_seconds = 0.0;  // hardware dependent
};

// Plans every scenario `runs` times (scenario order shuffled per run by
// `seed`), executes the selected plan once and reports rows in config order.
std::vector<BenchRow> run_bench(const Model &model, const BenchConfig &config, std::size_t runs,
                                std::uint64_t seed);

Json bench_to_json(const std::vector<BenchRow> &rows, std::size_t runs, std::uint64_t seed);

}  // namespace goalvar

#endif
