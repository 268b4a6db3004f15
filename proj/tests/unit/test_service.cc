#include "support/fixtures.h"

#include "goalvar/bench.h"
#include "goalvar/service.h"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

using namespace goalvar;

namespace {

const Model &model() { return fixture::model(); }

std::string session_body() {
    return dump(Json{{"before", to_json(fixture::milk_before())}, {"after", to_json(fixture::milk_after())}});
}

Json body_of(const Response &r) { return Json::parse(r.body); }

std::string answer_body(const Answer &a, std::optional<std::uint64_t> version = std::nullopt) {
    Json doc{{"answer", to_json(a)}};
    if (version)
        doc["version"] = *version;
    return dump(doc);
}

}  // namespace

TEST_CASE("a session is created, answered and exported") {
    Service svc(model());
    Response created = svc.handle("POST", "/v1/sessions", session_body());
    REQUIRE(created.status == 201);
    Json doc = body_of(created);
    CHECK(doc.at("id") == "s1");
    CHECK(doc.at("question").at("id") == "entities");

    auto script = fixture::milk_script();
    Json state = doc;
    while (!state.at("complete").get<bool>()) {
        std::string qid = state.at("question").at("id");
        Response r = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(script.at(qid)));
        REQUIRE(r.status == 200);
        state = body_of(r);
    }
    CHECK(state.at("version") == 10);
    CHECK(variations_equal(variation_from_json(state.at("variation")), fixture::milk_goal(), 0.0));

    Response got = svc.handle("GET", "/v1/sessions/s1", "");
    CHECK(got.status == 200);
    CHECK(got.body == dump(state));
    Response t = svc.handle("GET", "/v1/sessions/s1/transcript", "");
    CHECK(t.status == 200);
    CHECK(body_of(t).at("entries").size() == 10);
    CHECK(svc.sessions().size() == 1);

    Response again = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(true));
    CHECK(again.status == 422);
}

TEST_CASE("session ids increase") {
    Service svc(model());
    CHECK(body_of(svc.handle("POST", "/v1/sessions", session_body())).at("id") == "s1");
    CHECK(body_of(svc.handle("POST", "/v1/sessions", session_body())).at("id") == "s2");
}

TEST_CASE("failures map to status codes with a path") {
    Service svc(model());
    Response missing = svc.handle("GET", "/v1/sessions/s9", "");
    CHECK(missing.status == 404);
    CHECK(body_of(missing).at("code") == "not_found");
    CHECK(svc.handle("GET", "/v2/anything", "").status == 404);
    CHECK(svc.handle("DELETE", "/v1/sessions", "").status == 404);

    Response garbage = svc.handle("POST", "/v1/sessions", "{not json");
    CHECK(garbage.status == 400);
    Response no_after = svc.handle("POST", "/v1/sessions", dump(Json{{"before", to_json(fixture::milk_before())}}));
    CHECK(no_after.status == 400);
    CHECK(body_of(no_after).at("path") == "$.after");

    Json bad_env = to_json(fixture::milk_before());
    bad_env["instances"][0]["values"]["contentLevel"] = "full";
    Response bad = svc.handle("POST", "/v1/sessions", dump(Json{{"before", bad_env}, {"after", to_json(fixture::milk_after())}}));
    CHECK(bad.status == 400);
    CHECK(body_of(bad).at("path") == "$.before.instances[0].values.contentLevel");

    Response same = svc.handle("POST", "/v1/sessions",
                               dump(Json{{"before", to_json(fixture::milk_before())}, {"after", to_json(fixture::milk_before())}}));
    CHECK(same.status == 422);
    CHECK(body_of(same).at("code") == "no_changes_detected");

    // The rejected request above still consumed an id.
    Response created = svc.handle("POST", "/v1/sessions", session_body());
    REQUIRE(created.status == 201);
    std::string id = body_of(created).at("id");
    CHECK(id == "s2");
    Response wrong = svc.handle("POST", "/v1/sessions/" + id + "/answers", answer_body(std::vector<std::string>{"toaster"}));
    CHECK(wrong.status == 422);
    CHECK(body_of(wrong).at("code") == "invalid_answer");

    Response goal_kind = svc.handle("POST", "/v1/plan",
                                    dump(Json{{"environment", to_json(fixture::milk_before())},
                                              {"variation", to_json(Variation::closed(0, 1))}}));
    CHECK(goal_kind.status == 422);
}

TEST_CASE("answers carrying an old version are stale") {
    Service svc(model());
    REQUIRE(svc.handle("POST", "/v1/sessions", session_body()).status == 201);
    Response first = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(std::vector<std::string>{"bowl"}, 0));
    CHECK(first.status == 200);
    Response late = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(std::vector<std::string>{"bowl"}, 0));
    CHECK(late.status == 409);
    CHECK(body_of(late).at("code") == "stale_version");
    CHECK(body_of(svc.handle("GET", "/v1/sessions/s1", "")).at("version") == 1);
}

TEST_CASE("concurrent answers to one version apply once") {
    Service svc(model());
    REQUIRE(svc.handle("POST", "/v1/sessions", session_body()).status == 201);
    std::atomic<int> ok{0}, stale{0}, other{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            Response r = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(std::vector<std::string>{"bowl"}, 0));
            (r.status == 200 ? ok : r.status == 409 ? stale : other)++;
        });
    for (auto &t : threads)
        t.join();
    CHECK(ok == 1);
    CHECK(stale == 7);
    CHECK(other == 0);
    Json s = body_of(svc.handle("GET", "/v1/sessions/s1", ""));
    CHECK(s.at("version") == 1);
    CHECK(s.at("question").at("id") == "properties:bowl");
}

TEST_CASE("unversioned answers racing each other never double apply") {
    Service svc(model());
    REQUIRE(svc.handle("POST", "/v1/sessions", session_body()).status == 201);
    std::atomic<int> ok{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i)
        threads.emplace_back([&] {
            Response r = svc.handle("POST", "/v1/sessions/s1/answers", answer_body(std::vector<std::string>{"bowl"}));
            if (r.status == 200)
                ok++;
        });
    for (auto &t : threads)
        t.join();
    // Later winners answer the properties question, which rejects "bowl".
    CHECK(ok == 1);
    CHECK(body_of(svc.handle("GET", "/v1/sessions/s1", "")).at("version") == 1);
}

TEST_CASE("endpoint bodies equal the library's documents") {
    const Model &m = model();
    Service svc(m);
    EnvironmentState env = fixture::three_pour_environment();
    Variation goal = fixture::three_pour_goal();
    Json request{{"environment", to_json(env)}, {"variation", to_json(goal)}};

    Response cmp = svc.handle("POST", "/v1/compare", dump(request));
    REQUIRE(cmp.status == 200);
    Json expected{{"comparison", to_json(compare_to_variation(m.ontology, Value::environment(env), goal))},
                  {"environment", to_json(compare_environment(m.ontology, env, *goal.get_if<EnvironmentVariation>()))}};
    CHECK(cmp.body == dump(expected));

    PlanResult direct = plan(m, env, goal);
    Response pl = svc.handle("POST", "/v1/plan", dump(request));
    REQUIRE(pl.status == 200);
    CHECK(pl.body == dump(to_json(direct)));

    Json exec_request = request;
    exec_request["plan"] = body_of(pl).at("plan");
    Response ex = svc.handle("POST", "/v1/execute", dump(exec_request));
    REQUIRE(ex.status == 200);
    CHECK(ex.body == dump(to_json(execute(m, direct.plan, env, goal))));
    CHECK(body_of(ex).at("verdict") == "Satisfied");

    exec_request.erase("variation");
    CHECK(body_of(svc.handle("POST", "/v1/execute", dump(exec_request))).at("verdict") == "Unchecked");
}

TEST_CASE("grid scenarios plan the same through the boundary") {
    const Model &m = model();
    Service svc(m);
    BenchConfig config = bench_config_from_json(m.ontology, read_json_file(fixture::data_path("bench_grid.json")));
    for (const auto &s : config.scenarios) {
        EnvironmentState env = scenario_environment(m.ontology, config, s);
        Variation goal = scenario_goal(config, s);
        Response r = svc.handle("POST", "/v1/plan", dump(Json{{"environment", to_json(env)}, {"variation", to_json(goal)}}));
        REQUIRE(r.status == 200);
        CHECK(r.body == dump(to_json(plan(m, env, goal))));
    }
}

TEST_CASE("the HTTP front end speaks JSON") {
    Service svc(model());
    HttpServer server(svc);
    int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.run(); });

    httplib::Client client("127.0.0.1", port);
    auto created = client.Post("/v1/sessions", session_body(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(Json::parse(created->body).at("id") == "s1");
    CHECK(created->get_header_value("Content-Type") == "application/json");

    auto got = client.Get("/v1/sessions/s1");
    REQUIRE(got);
    CHECK(got->status == 200);

    auto form = client.Post("/v1/sessions", "a=b", "application/x-www-form-urlencoded");
    REQUIRE(form);
    CHECK(form->status == 415);

    auto missing = client.Get("/v1/sessions/s7/transcript");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    server.stop();
    loop.join();
}
