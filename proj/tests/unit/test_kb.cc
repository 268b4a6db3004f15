#include "support/fixtures.h"

#include <doctest.h>

using namespace goalvar;

namespace {

PropertyDef number(const std::string &name) { return {name, ValueKind::Number, std::string("L"), std::nullopt}; }

Ontology small() {
    Ontology o;
    o.define_concept("Entity", {}, {});
    o.define_concept("Object", {"Entity"}, {{"color", ValueKind::ConceptRef, std::nullopt, std::nullopt}});
    o.define_concept("Container", {"Object"},
                     {number("contentLevel"), number("contentVolume"),
                      {"containedInstances", ValueKind::Collection, std::nullopt, std::nullopt}});
    o.define_concept("LiquidContainer", {"Container"}, {});
    o.define_concept("Mug", {"LiquidContainer"}, {});
    return o;
}

}  // namespace

TEST_CASE("container concept resolves own and inherited properties") {
    Ontology o = small();
    const auto &props = o.resolved_properties("Container");
    REQUIRE(props.size() == 4);
    CHECK(props[0].name == "color");
    CHECK(props[1].name == "contentLevel");
    CHECK(o.get_concept("Container").own_properties.size() == 3);
    CHECK(o.resolved_properties("Mug").size() == 4);
    CHECK(o.find_property("Mug", "contentVolume") != nullptr);
    CHECK(o.find_property("Object", "contentVolume") == nullptr);
}

TEST_CASE("subconcepts are reflexive and transitive") {
    Ontology o = small();
    CHECK(o.is_subconcept("Mug", "Mug"));
    CHECK(o.is_subconcept("Mug", "Object"));
    CHECK_FALSE(o.is_subconcept("Object", "Mug"));
    CHECK(o.lineage("Mug") == std::vector<std::string>{"Mug", "LiquidContainer", "Container", "Object", "Entity"});
}

TEST_CASE("malformed concept definitions are rejected") {
    Ontology o = small();
    CHECK_THROWS_AS(o.define_concept("Loop", {"Loop"}, {}), CycleError);
    CHECK_THROWS_AS(o.define_concept("Mug", {"Container"}, {}), DuplicateConceptError);
    CHECK_THROWS_AS(o.define_concept("Plate", {"Dish"}, {}), UnknownParentError);
    CHECK_THROWS_AS(o.define_concept("Vat", {"Container"}, {number("contentLevel")}), DuplicatePropertyError);
    CHECK_THROWS_AS(o.get_concept("Nope"), UnknownConceptError);
}

TEST_CASE("diamond inheritance shares one property definition") {
    Ontology o;
    o.define_concept("Entity", {}, {number("mass")});
    o.define_concept("A", {"Entity"}, {});
    o.define_concept("B", {"Entity"}, {});
    o.define_concept("AB", {"A", "B"}, {});
    CHECK(o.resolved_properties("AB").size() == 1);
    CHECK(o.is_subconcept("AB", "B"));
}

TEST_CASE("instance values are read through the environment") {
    EnvironmentState env = fixture::environment({fixture::container("WhiteMugInstance", "Mug", 0.45, 0.5)});
    CHECK(get_value(env, "WhiteMugInstance", "contentLevel").as_number() == doctest::Approx(0.45));
    CHECK(get_value(env, "WhiteMugInstance", "color").as_concept() == "White");
    CHECK_THROWS_AS(get_value(env, "Ghost", "contentLevel"), UnknownInstanceError);
    CHECK_THROWS_AS(get_value(env, "WhiteMugInstance", "dirty"), UnknownPropertyError);

    EnvironmentState fig8 = fixture::three_pour_environment();
    CHECK(get_value(fig8, "B", "contentVolume").as_number() == doctest::Approx(0.5));
}

TEST_CASE("set_value returns a new state and keeps the container invariant") {
    const Ontology &o = fixture::model().ontology;
    EnvironmentState env = fixture::three_pour_environment();
    EnvironmentState next = set_value(o, env, "B", "contentLevel", Value::number(0.3));
    CHECK(get_value(next, "B", "contentLevel").as_number() == doctest::Approx(0.3));
    CHECK(get_value(env, "B", "contentLevel").as_number() == doctest::Approx(0.08));
    CHECK_THROWS_AS(set_value(o, env, "B", "contentLevel", Value::number(0.6)), InvariantViolationError);
    CHECK_THROWS_AS(set_value(o, env, "B", "contentLevel", Value::number(-0.1)), InvariantViolationError);
    CHECK_THROWS_AS(set_value(o, env, "B", "contentLevel", Value::boolean(true)), DomainMismatchError);
}

TEST_CASE("environment checks report dangling references and missing values") {
    const Ontology &o = fixture::model().ontology;
    Instance mug = complete_instance(o, fixture::container("m", "Mug", 0.1, 0.3));
    mug.values["location"] = Value::location(Location{"nowhere", Pose{}});
    EnvironmentState env({{"m", mug}});
    CHECK_FALSE(check_environment(o, env).empty());
    CHECK_THROWS_AS(validate_environment(o, env), ValidationError);

    Instance bare{"b", "Bowl", {{"contentLevel", Value::number(0.1)}}};
    CHECK_THROWS_AS(fixture::environment({bare}), ValidationError);
}

TEST_CASE("complete_instance fills ontology defaults") {
    const Ontology &o = fixture::model().ontology;
    Instance i = complete_instance(o, fixture::container("c", "Cup", 0.0, 0.3));
    CHECK(i.values.at("color").as_concept() == "White");
    CHECK(i.values.at("containedInstances").as_collection().elements.empty());
    CHECK(i.values.at("location").as_location().reference == "world");
}
