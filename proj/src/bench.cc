#include "goalvar/bench.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <set>

namespace goalvar {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &message) {
    throw ValidationError({Issue{path, message}});
}

const Json &field(const Json &doc, const char *key, const std::string &path) {
    if (!doc.is_object())
        fail(path, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end())
        fail(path + "." + key, "missing field");
    return *it;
}

std::string text(const Json &doc, const char *key, const std::string &path) {
    const Json &v = field(doc, key, path);
    if (!v.is_string())
        fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

double number(const Json &doc, const std::string &path) {
    if (!doc.is_number())
        fail(path, "expected a number");
    return doc.get<double>();
}

int c1_of(const Json &doc, const std::string &path) {
    std::string s = text(doc, "c1", path);
    if (s == "fixed")
        return 1;
    if (s == "interval")
        return 2;
    if (s == "interval-union")
        return 3;
    fail(path + ".c1", "expected fixed, interval or interval-union");
}

int c2_of(const Json &doc, const std::string &path) {
    const Json &v = field(doc, "c2", path);
    if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 4)
        fail(path + ".c2", "expected 1, 2, 3 or 4");
    return v.get<int>();
}

int c3_of(const Json &doc, const std::string &path) {
    std::string s = text(doc, "c3", path);
    if (s == "yes")
        return 1;
    if (s == "no")
        return 2;
    fail(path + ".c3", "expected yes or no");
}

bool kind_matches(int c1, const Variation &v) {
    switch (c1) {
    case 1:
        return v.is<FixedVariation>();
    case 2:
        return v.is<IntervalVariation>();
    default:
        return v.is<UnionVariation>();
    }
}

bool relation_holds(int c2, const IntervalSet &t, double level, double volume) {
    const auto &parts = t.components();
    double inf = parts.front().lower;
    double sup = parts.back().upper;
    switch (c2) {
    case 1:
        return sup < level && level <= volume;
    case 2:
        return level < inf && sup < volume;
    case 3:
        return level < inf && sup <= volume + kEpsilon && t.contains(volume);
    default:
        return level <= volume && volume < inf;
    }
}

std::string criteria_name(int c1, int c2, int c3) {
    return "C1." + std::to_string(c1) + " C2." + std::to_string(c2) + " C3." + std::to_string(c3);
}

}  // namespace

BenchConfig bench_config_from_json(const Ontology &ontology, const Json &doc) {
    BenchConfig config;
    const Json &containers = field(doc, "containers", "$");
    if (!containers.is_array() || containers.empty())
        fail("$.containers", "expected a non-empty array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < containers.size(); ++i) {
        std::string path = "$.containers[" + std::to_string(i) + "]";
        BenchContainer c{text(containers[i], "id", path), text(containers[i], "concept", path),
                         number(field(containers[i], "contentVolume", path), path + ".contentVolume")};
        if (!ontology.has_concept(c.concept_id) || !ontology.is_subconcept(c.concept_id, "Container"))
            fail(path + ".concept", "'" + c.concept_id + "' is not a Container concept");
        if (c.volume <= 0.0)
            fail(path + ".contentVolume", "must be positive");
        if (!ids.insert(c.id).second)
            fail(path + ".id", "duplicate container '" + c.id + "'");
        config.containers.push_back(std::move(c));
    }
    config.target = text(doc, "target", "$");
    if (!ids.count(config.target))
        fail("$.target", "unknown container '" + config.target + "'");
    config.goal_concept = text(doc, "goalConcept", "$");
    if (!ontology.has_concept(config.goal_concept))
        fail("$.goalConcept", "unknown concept '" + config.goal_concept + "'");
    const BenchContainer &target =
        *std::find_if(config.containers.begin(), config.containers.end(),
                      [&](const BenchContainer &c) { return c.id == config.target; });
    if (!ontology.is_subconcept(target.concept_id, config.goal_concept))
        fail("$.goalConcept", "target '" + target.id + "' is not a " + config.goal_concept);

    const Json &scenarios = field(doc, "scenarios", "$");
    if (!scenarios.is_array())
        fail("$.scenarios", "expected an array");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Json &s = scenarios[i];
        std::string path = "$.scenarios[" + std::to_string(i) + "]";
        BenchScenario sc;
        sc.c1 = c1_of(s, path);
        sc.c2 = c2_of(s, path);
        sc.c3 = c3_of(s, path);
        if (sc.c2 == 4 && sc.c3 == 1)
            fail(path, "C2.4 and C3.1 are mutually exclusive: no container can exceed its volume");
        sc.name = s.contains("name") ? text(s, "name", path) : criteria_name(sc.c1, sc.c2, sc.c3);

        const Json &levels = field(s, "levels", path);
        if (!levels.is_object())
            fail(path + ".levels", "expected an object");
        for (const BenchContainer &c : config.containers) {
            std::string lpath = path + ".levels." + c.id;
            auto it = levels.find(c.id);
            if (it == levels.end())
                fail(lpath, "missing level");
            double level = number(*it, lpath);
            if (level < -kEpsilon || level > c.volume + kEpsilon)
                fail(lpath, "level outside [0, " + std::to_string(c.volume) + "]");
            sc.levels[c.id] = level;
        }
        for (const auto &[id, _] : levels.items())
            if (!ids.count(id))
                fail(path + ".levels." + id, "unknown container");

        sc.target = variation_from_json(field(s, "variation", path), path + ".variation");
        auto issues = check_variation(ontology, sc.target, ValueKind::Number, path + ".variation");
        if (!issues.empty())
            throw ValidationError(std::move(issues));
        if (!kind_matches(sc.c1, sc.target))
            fail(path + ".variation", "variation type " + std::string(type_name(sc.target)) +
                                          " does not match C1." + std::to_string(sc.c1));
        IntervalSet t = IntervalSet::from_variation(sc.target);
        if (t.is_empty())
            fail(path + ".variation", "selects no value");
        if (!relation_holds(sc.c2, t, sc.levels.at(config.target), target.volume))
            fail(path + ".variation", "target does not satisfy C2." + std::to_string(sc.c2) + " for '" +
                                          config.target + "'");
        config.scenarios.push_back(std::move(sc));
    }
    return config;
}

EnvironmentState scenario_environment(const Ontology &ontology, const BenchConfig &config,
                                      const BenchScenario &scenario) {
    Json instances = Json::array();
    for (const BenchContainer &c : config.containers)
        instances.push_back({{"id", c.id},
                             {"concept", c.concept_id},
                             {"values",
                              {{kContentLevel, scenario.levels.at(c.id)}, {kContentVolume, c.volume}}}});
    return environment_from_json(ontology, Json{{"instances", instances}});
}

Variation scenario_goal(const BenchConfig &config, const BenchScenario &scenario) {
    InstancePropertiesVariation element{ConceptVariation{config.goal_concept, true},
                                        {{kContentLevel, scenario.target}}};
    return EnvironmentVariation{CollectionSubsetVariation{{Variation(std::move(element))}}};
}

std::vector<BenchRow> run_bench(const Model &model, const BenchConfig &config, std::size_t runs,
                                std::uint64_t seed) {
    const std::size_t n = config.scenarios.size();
    std::vector<EnvironmentState> envs;
    std::vector<Variation> goals;
    std::vector<BenchRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const BenchScenario &s = config.scenarios[i];
        envs.push_back(scenario_environment(model.ontology, config, s));
        goals.push_back(scenario_goal(config, s));
        rows[i] = BenchRow{i, s.name, s.c1, s.c2, s.c3, s.expected_satisfiable()};
    }

    std::vector<std::optional<PlanResult>> results(n);
    std::vector<double> seconds(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t run = 0; run < runs; ++run) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            auto start = std::chrono::steady_clock::now();
            PlanResult result = plan(model, envs[i], goals[i]);
            seconds[i] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (!results[i])
                results[i] = std::move(result);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        BenchRow &row = rows[i];
        if (runs > 0) {
            row.mean_seconds = seconds[i] / static_cast<double>(runs);
        } else {
            results[i] = plan(model, envs[i], goals[i]);
        }
        row.satisfiable = results[i]->satisfiable;
        row.steps = results[i]->plan.step_count();
        if (row.satisfiable)
            row.verdict = execute(model, results[i]->plan, envs[i], goals[i]).verdict;
    }
    return rows;
}

Json bench_to_json(const std::vector<BenchRow> &rows, std::size_t runs, std::uint64_t seed) {
    Json scenarios = Json::array();
    for (const BenchRow &r : rows)
        scenarios.push_back({{"index", r.index},
                             {"name", r.name},
                             {"c1", r.c1},
                             {"c2", r.c2},
                             {"c3", r.c3},
                             {"expected", r.expected},
                             {"satisfiable", r.satisfiable},
                             {"steps", r.steps},
                             {"verdict", std::string(to_string(r.verdict))},
                             {"meanSeconds", r.mean_seconds}});
    return Json{{"runs", runs},
                {"seed", seed},
                {"hardwareDependent", Json::array({"meanSeconds"})},
                {"scenarios", scenarios}};
}

}  // namespace goalvar
