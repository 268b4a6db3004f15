#include "support/fixtures.h"

#include <doctest.h>

using namespace goalvar;

namespace {

const Model &model() { return fixture::model(); }

Session milk_session() { return Session::start(model(), "t", fixture::milk_before(), fixture::milk_after()); }

std::vector<std::string> option_ids(const Question &q) {
    std::vector<std::string> ids;
    for (const auto &o : q.options)
        ids.push_back(o.id);
    return ids;
}

}  // namespace

TEST_CASE("the milk demonstration changes the bowl and the carton") {
    DemonstrationDiff d = diff_demonstration(model(), fixture::milk_before(), fixture::milk_after());
    REQUIRE(d.changed.size() == 2);
    CHECK(d.changed[0].id == "bowl");
    CHECK(d.changed[1].id == "milk");
    REQUIRE(d.changed[0].changes.size() == 2);
    CHECK(d.changed[0].changes[0].property == "contentLevel");
    CHECK(d.changed[0].changes[1].property == "location");
    CHECK(d.changed[1].changes.size() == 1);
    CHECK(d.recognized.skills.size() == 1);
}

TEST_CASE("the question bound counts the worst-case schedule") {
    // Hand count: 1 entity question, then bowl: properties 1, contentLevel
    // 1 + 4, location 1 + 2, concept 3; milk: properties 1, contentLevel
    // 1 + 4, concept 3.
    std::size_t by_hand = 1 + (1 + (1 + 4) + (1 + 2) + 3) + (1 + (1 + 4) + 3);
    DemonstrationDiff d = diff_demonstration(model(), fixture::milk_before(), fixture::milk_after());
    CHECK(question_bound(model(), d) == by_hand);
    CHECK(by_hand == 22);
    CHECK(milk_session().bound() == 22);
    CHECK(max_parameters(ValueKind::Number) == 4);
    CHECK(max_parameters(ValueKind::Location) == 2);
    CHECK(max_parameters(ValueKind::Boolean) == 0);
}

TEST_CASE("no change means no session") {
    CHECK_THROWS_AS(Session::start(model(), "t", fixture::milk_before(), fixture::milk_before()),
                    NoChangesDetectedError);
}

TEST_CASE("questions follow entities, properties, kinds, parameters, concept") {
    Session s = milk_session();
    const Model &m = model();
    std::vector<std::string> ids;
    std::map<std::string, Answer> script = fixture::milk_script();
    while (!s.complete()) {
        const Question &q = *s.pending();
        ids.push_back(q.id);
        s = s.answer(m, script.at(q.id));
    }
    CHECK(ids == std::vector<std::string>{"entities", "properties:bowl", "kind:bowl:contentLevel",
                                          "param:bowl:contentLevel:lower", "param:bowl:contentLevel:lowerClosed",
                                          "param:bowl:contentLevel:upper", "param:bowl:contentLevel:upperClosed",
                                          "kind:bowl:#concept", "concept:bowl",
                                          "param:bowl:#concept:includeSubconcepts"});
    CHECK(s.version() == 10);
    CHECK(variations_equal(*s.result(), fixture::milk_goal(), 0.0));
}

TEST_CASE("first questions offer the changed entities and their properties") {
    Session s = milk_session();
    const Question &q = *s.pending();
    CHECK(q.kind == QuestionKind::SelectRelevantEntities);
    CHECK(q.answer_type == AnswerType::MultiSelect);
    CHECK(option_ids(q) == std::vector<std::string>{"bowl", "milk"});

    Session t = s.answer(model(), std::vector<std::string>{"bowl"});
    CHECK(option_ids(*t.pending()) == std::vector<std::string>{"contentLevel", "location"});
    CHECK(t.questions_asked() == 2);
}

TEST_CASE("generalization offers the lineage that still defines the properties") {
    Session s = milk_session();
    const Model &m = model();
    auto script = fixture::milk_script();
    while (s.pending()->id != "concept:bowl")
        s = s.answer(m, script.at(s.pending()->id));
    CHECK(s.pending()->kind == QuestionKind::GeneralizeConcept);
    CHECK(option_ids(*s.pending()) == std::vector<std::string>{"Bowl", "LiquidContainer", "Container"});
}

TEST_CASE("defaults complete a session") {
    Session s = run_script(model(), milk_session(), {}, true);
    REQUIRE(s.complete());
    // Every changed entity and property is kept; numbers default to +-10%.
    const auto *env = s.result()->get_if<EnvironmentVariation>();
    REQUIRE(env);
    REQUIRE(env->entities.elements.size() == 2);
    const auto *bowl = env->entities.elements[0].get_if<InstancePropertiesVariation>();
    REQUIRE(bowl);
    const auto *level = bowl->properties.at("contentLevel").get_if<IntervalVariation>();
    REQUIRE(level);
    CHECK(level->lower == doctest::Approx(0.27));
    CHECK(level->upper == doctest::Approx(0.33));
    CHECK(bowl->properties.at("location").is<FixedVariation>());
    CHECK(s.transcript().size() <= s.bound());
    CHECK(contains(model().ontology, *s.result(), Value::environment(fixture::milk_after())));
}

TEST_CASE("a ball around the final location takes its default radius") {
    std::map<std::string, Answer> script{{"kind:bowl:location", std::string("Ball")}};
    Session s = run_script(model(), milk_session(), script, true);
    const auto *bowl =
        s.result()->get_if<EnvironmentVariation>()->entities.elements[0].get_if<InstancePropertiesVariation>();
    const auto *ball = bowl->properties.at("location").get_if<BallVariation>();
    REQUIRE(ball);
    CHECK(ball->reference == std::optional<std::string>("world"));
    CHECK(ball->max_distance == doctest::Approx(0.05));
    CHECK(ball->max_angle == doctest::Approx(0.1));
    CHECK(contains(model().ontology, *s.result(), Value::environment(fixture::milk_after())));
}

TEST_CASE("selecting no entity accepts every environment") {
    Session s = milk_session().answer(model(), std::vector<std::string>{});
    REQUIRE(s.complete());
    CHECK(s.transcript().size() == 1);
    const auto *env = s.result()->get_if<EnvironmentVariation>();
    REQUIRE(env);
    CHECK(env->entities.elements.empty());
    CHECK(collection_member(model().ontology, fixture::milk_before(), env->entities).satisfied);
    CHECK(contains(model().ontology, *s.result(), Value::environment(fixture::three_pour_environment())));
}

TEST_CASE("invalid answers leave the session as it was") {
    Session s = milk_session();
    const Model &m = model();
    CHECK_THROWS_AS(s.answer(m, std::vector<std::string>{"toaster"}), InvalidAnswerError);
    CHECK_THROWS_AS(s.answer(m, std::vector<std::string>{"bowl", "bowl"}), InvalidAnswerError);
    CHECK_THROWS_AS(s.answer(m, 0.3), InvalidAnswerError);
    CHECK(s.version() == 0);
    CHECK(s.pending()->id == "entities");

    auto script = fixture::milk_script();
    while (s.pending()->id != "param:bowl:contentLevel:upper")
        s = s.answer(m, script.at(s.pending()->id));
    CHECK_THROWS_AS(s.answer(m, 0.1), InvalidAnswerError);  // below the lower bound 0.28
    CHECK_THROWS_AS(s.answer(m, std::string("high")), InvalidAnswerError);

    Session done = run_script(m, milk_session(), script);
    CHECK_THROWS(done.answer(m, true));
}

TEST_CASE("interval sets are accepted as text") {
    Session s = milk_session();
    const Model &m = model();
    s = s.answer(m, std::vector<std::string>{"bowl"});
    s = s.answer(m, std::vector<std::string>{"contentLevel"});
    s = s.answer(m, std::string("Union"));
    CHECK(s.pending()->answer_type == AnswerType::Text);
    CHECK_THROWS_AS(s.answer(m, std::string("[0.3, ")), InvalidAnswerError);
    CHECK_THROWS_AS(s.answer(m, std::string("[0.3, 0.2]")), InvalidAnswerError);
    s = s.answer(m, std::string("[0.28, 0.32] u [0.45, 0.5]"));
    s = run_script(m, s, {}, true);
    const auto *ipv =
        s.result()->get_if<EnvironmentVariation>()->entities.elements[0].get_if<InstancePropertiesVariation>();
    CHECK(contains(m.ontology, ipv->properties.at("contentLevel"), Value::number(0.46)));
}

TEST_CASE("fixed concept and whole kinds") {
    const Model &m = model();
    std::map<std::string, Answer> script = fixture::milk_script();
    script["kind:bowl:#concept"] = std::string("Fixed");
    Session fixed = run_script(m, milk_session(), script);
    CHECK(fixed.transcript().size() == 8);
    const auto *ipv =
        fixed.result()->get_if<EnvironmentVariation>()->entities.elements[0].get_if<InstancePropertiesVariation>();
    CHECK(ipv->concept_variation.base == "Bowl");
    CHECK_FALSE(ipv->concept_variation.include_subconcepts);

    script["kind:bowl:#concept"] = std::string("Whole");
    Session whole = run_script(m, milk_session(), script);
    ipv = whole.result()->get_if<EnvironmentVariation>()->entities.elements[0].get_if<InstancePropertiesVariation>();
    CHECK(ipv->concept_variation.base == "Container");
    CHECK(ipv->concept_variation.include_subconcepts);
}

TEST_CASE("scripts must cover every question without defaults") {
    std::map<std::string, Answer> partial{{"entities", std::vector<std::string>{"bowl"}}};
    CHECK_THROWS_AS(run_script(model(), milk_session(), partial), InvalidAnswerError);
}
