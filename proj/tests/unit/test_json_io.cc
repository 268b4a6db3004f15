#include "support/fixtures.h"

#include <doctest.h>

using namespace goalvar;

namespace {

const Model &model() { return fixture::model(); }

std::string error_path(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("tagged values round trip") {
    Pose p;
    p.position = {0.4, 0.1, 0.75};
    p.orientation = {0.0, 0.0, 0.0, 1.0};
    Collection c{{{"a", Value::number(1.5)}, {"b", Value::boolean(false)}}};
    std::vector<Value> values{Value::number(0.3),
                              Value::integer(-7),
                              Value::boolean(true),
                              Value::concept_ref("Bowl"),
                              Value::instance_ref("bowl"),
                              Value::pose(p),
                              Value::location(Location{"table", p}),
                              Value::collection(c),
                              Value::instance(*fixture::milk_before().find("bowl"))};
    for (const Value &v : values) {
        Json doc = to_json(v);
        Value back = value_from_json(doc);
        CHECK(back.kind() == v.kind());
        CHECK(values_equal(back, v, 0.0));
        CHECK(dump(to_json(back)) == dump(doc));
    }
    CHECK(to_json(Value::number(0.3)) == Json{{"kind", "Number"}, {"value", 0.3}});
    // Environments are documents of their own, never nested values.
    CHECK_THROWS_AS(value_from_json(to_json(Value::environment(fixture::milk_before()))), ValidationError);
}

TEST_CASE("a goal document with the variation type names parses") {
    Json doc = read_json_file(fixture::data_path("demo/one_cup_full.json"));
    Variation v = variation_from_json(doc);
    CHECK(type_name(v) == "EnvironmentDataRangeEntityVariation");
    const auto &entities = v.get_if<EnvironmentVariation>()->entities;
    REQUIRE(entities.elements.size() == 1);
    const auto *ipv = entities.elements[0].get_if<InstancePropertiesVariation>();
    REQUIRE(ipv);
    CHECK(ipv->concept_variation.base == "Cup");
    CHECK(ipv->properties.at(kContentLevel).is<FixedVariation>());
    CHECK(to_json(v) == doc);
}

TEST_CASE("every variation type survives a round trip") {
    BallVariation ball;
    ball.reference = "world";
    ball.max_distance = 0.05;
    ball.max_angle = 0.1;
    std::vector<Variation> vs{Variation::empty(),
                              Variation::whole(),
                              Variation::fixed(Value::number(0.3)),
                              Variation::interval(0.28, false, 0.32, true),
                              Variation::any_of({Variation::closed(0.3, 0.32), Variation::closed(0.45, 0.5)}),
                              Variation::all_of({Variation::closed(0.0, 0.5), Variation::closed(0.4, 1.0)}),
                              Variation(ball),
                              ConceptVariation{"LiquidContainer", false},
                              fixture::milk_goal()};
    for (const auto &v : vs) {
        Variation back = variation_from_json(to_json(v));
        CHECK(variations_equal(back, v, 0.0));
        CHECK(type_name(back) == type_name(v));
    }
}

TEST_CASE("environment documents fill defaults and add the world frame") {
    Json doc = read_json_file(fixture::data_path("demo/milk_before.json"));
    EnvironmentState env = environment_from_json(model().ontology, doc);
    CHECK(env.contains("world"));
    CHECK(get_value(env, "bowl", kContentLevel).as_number() == 0.0);
    CHECK(get_value(env, "table", "location").kind() == ValueKind::Location);
    EnvironmentState again = environment_from_json(model().ontology, to_json(env));
    CHECK(dump(to_json(again)) == dump(to_json(env)));
}

TEST_CASE("readers name the offending path") {
    const Ontology &o = model().ontology;
    CHECK(error_path([&] {
              environment_from_json(o, Json::parse(R"({"instances": [{"id": "a", "concept": "Cup",
                  "values": {"contentLevel": 0.1}}, {"id": "b", "concept": "Cup", "values": {"contentLevel": "full"}}]})"));
          }) == "$.instances[1].values.contentLevel");
    CHECK(error_path([&] { environment_from_json(o, Json::parse(R"({"instances": 3})")); }) == "$.instances");
    CHECK(error_path([&] { variation_from_json(Json::parse(R"({"type": "Interval", "lower": 0})")); }) !=
          "<no error>");
    CHECK(error_path([&] { variation_from_json(Json::parse(R"({"type": "Blob"})"), "$.goal"); }) == "$.goal.type");
    CHECK_THROWS_AS(parse_json("{\"a\": "), ValidationError);
    CHECK_THROWS_AS(environment_from_json(o, Json::parse(R"({"instances": [{"id": "a", "concept": "Unicorn",
        "values": {}}]})")),
                    Error);
}

TEST_CASE("dumps are canonical") {
    Json a = Json::parse(R"({"b": 1, "a": [true, null], "c": {"z": 0.5, "y": "x"}})");
    std::string text = dump(a);
    CHECK(text == "{\n  \"a\": [\n    true,\n    null\n  ],\n  \"b\": 1,\n  \"c\": {\n    \"y\": \"x\",\n    \"z\": 0.5\n  }\n}\n");
    CHECK(dump(parse_json(text)) == text);

    EnvironmentState env = fixture::environment(
        {fixture::container("zeta", "Cup", 0.1, 0.3), fixture::container("alpha", "Cup", 0.2, 0.3)});
    Json doc = to_json(env);
    std::vector<std::string> ids;
    for (const auto &i : doc.at("instances"))
        ids.push_back(i.at("id"));
    CHECK(ids == std::vector<std::string>{"alpha", "world", "zeta"});
}

TEST_CASE("answer scripts come as lists or maps") {
    Json list = read_json_file(fixture::data_path("demo/milk_answers.json"));
    auto script = answer_script_from_json(list);
    CHECK(script.size() == 10);
    CHECK(std::get<std::vector<std::string>>(script.at("entities")) == std::vector<std::string>{"bowl"});
    CHECK(std::get<double>(script.at("param:bowl:contentLevel:lower")) == doctest::Approx(0.28));

    auto map = answer_script_from_json(Json::parse(R"({"entities": ["bowl"], "kind:bowl:contentLevel": "Fixed"})"));
    CHECK(std::get<std::string>(map.at("kind:bowl:contentLevel")) == "Fixed");

    CHECK_THROWS_AS(answer_script_from_json(Json::parse(R"([{"question": "a", "answer": 1},
                                                             {"question": "a", "answer": 2}])")),
                    ValidationError);
    CHECK_THROWS_AS(answer_from_json(Json::parse(R"({"x": 1})")), ValidationError);
}

TEST_CASE("plans round trip through their document") {
    const Model &m = model();
    PlanResult r = plan(m, fixture::three_pour_environment(), fixture::three_pour_goal());
    Json doc = to_json(r.plan);
    CHECK(doc.at("stepCount") == 3);
    ExecutionPlan back = plan_from_json(m, doc);
    CHECK(to_json(back) == doc);

    Json bad = doc;
    bad["steps"][1]["alternatives"][0]["skill"]["bindings"]["amount"] = "lots";
    CHECK(error_path([&] { plan_from_json(m, bad); }) == "$.steps[1].alternatives[0].skill.bindings.amount");
    bad = doc;
    bad["steps"][0]["alternatives"] = Json::array();
    CHECK_THROWS_AS(plan_from_json(m, bad), ValidationError);
}

TEST_CASE("the ontology and registry documents reproduce the model") {
    const Model &m = model();
    Json o = to_json(m.ontology);
    CHECK(to_json(ontology_from_json(o)) == o);
    Json r = to_json(m.skills);
    CHECK(to_json(registry_from_json(m.ontology, r)) == r);
    Model rebuilt = model_from_json(default_ontology_document(), default_registry_document());
    CHECK(to_json(rebuilt.ontology) == o);
}

TEST_CASE("sessions export their question and transcript") {
    const Model &m = model();
    Session s = Session::start(m, "s1", fixture::milk_before(), fixture::milk_after());
    Json doc = to_json(s);
    CHECK(doc.at("id") == "s1");
    CHECK(doc.at("version") == 0);
    CHECK(doc.at("bound") == 22);
    CHECK(doc.at("question").at("id") == "entities");
    CHECK(doc.at("variation").is_null());

    s = run_script(m, s, fixture::milk_script());
    Json t = transcript_to_json(s);
    CHECK(t.at("entries").size() == 10);
    CHECK(t.at("complete") == true);
    CHECK(variations_equal(variation_from_json(t.at("variation")), fixture::milk_goal(), 0.0));
}
