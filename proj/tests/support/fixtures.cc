#include "fixtures.h"

#ifndef GOALVAR_DATA_DIR
#error "GOALVAR_DATA_DIR must point at the data directory"
#endif

namespace fixture {

using namespace goalvar;

const Model &model() { return default_model(); }

std::string data_path(const std::string &name) { return std::string(GOALVAR_DATA_DIR) + "/" + name; }

EnvironmentState environment(const std::vector<Instance> &instances) {
    std::map<std::string, Instance> all;
    all.emplace("world", Instance{"world", "Frame", {}});
    for (const Instance &i : instances)
        all.insert_or_assign(i.id, complete_instance(model().ontology, i));
    EnvironmentState env(std::move(all));
    validate_environment(model().ontology, env);
    return env;
}

Instance container(const std::string &id, const std::string &concept_id, double level, double volume) {
    return Instance{id, concept_id, {{kContentLevel, Value::number(level)}, {kContentVolume, Value::number(volume)}}};
}

Variation level_goal(const std::string &concept_id, const Variation &level) {
    InstancePropertiesVariation element{ConceptVariation{concept_id, true}, {{kContentLevel, level}}};
    return EnvironmentVariation{CollectionSubsetVariation{{Variation(element)}}};
}

EnvironmentState environment(const std::vector<oracle::UnitContainer> &containers) {
    std::vector<Instance> out;
    for (const auto &c : containers)
        out.push_back(container(c.id, c.concept_id, static_cast<double>(c.level) / 200.0,
                                static_cast<double>(c.volume) / 200.0));
    return environment(out);
}

double total_liquid(const EnvironmentState &env) {
    double sum = 0.0;
    for (const auto &[id, i] : env.instances())
        if (is_container(i))
            sum += content_level(i);
    return sum;
}

EnvironmentState three_pour_environment() {
    return environment({container("B", "Bowl", 0.08, 0.5), container("M", "MilkCarton", 0.1, 1.0),
                        container("C1", "Cup", 0.1, 0.3), container("C2", "Cup", 0.02, 0.3)});
}

Variation three_pour_goal() {
    return level_goal("LiquidContainer",
                      Variation::any_of({Variation::closed(0.3, 0.32), Variation::closed(0.45, 0.5)}));
}

EnvironmentState milk_before() {
    return environment_from_json(model().ontology, read_json_file(data_path("demo/milk_before.json")));
}

EnvironmentState milk_after() {
    return environment_from_json(model().ontology, read_json_file(data_path("demo/milk_after.json")));
}

std::map<std::string, Answer> milk_script() {
    return answer_script_from_json(read_json_file(data_path("demo/milk_answers.json")));
}

Variation milk_goal() { return level_goal("LiquidContainer", Variation::closed(0.28, 0.32)); }

}  // namespace fixture
