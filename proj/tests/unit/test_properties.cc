#include "support/fixtures.h"
#include "support/generators.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace goalvar;

namespace {

const Model &model() { return fixture::model(); }

using Costs = std::vector<std::vector<std::optional<std::size_t>>>;

Costs random_costs(gen::Rng &rng) {
    Costs costs(static_cast<std::size_t>(rng.integer(0, 5)));
    long cols = rng.integer(0, 6);
    for (auto &row : costs)
        for (long c = 0; c < cols; ++c)
            row.push_back(rng.coin(0.3) ? std::nullopt : std::optional<std::size_t>(rng.integer(0, 6)));
    return costs;
}

Answer random_answer(gen::Rng &rng, const Question &q) {
    switch (q.answer_type) {
    case AnswerType::MultiSelect: {
        std::vector<std::string> chosen;
        for (const auto &o : q.options)
            if (rng.coin(0.7))
                chosen.push_back(o.id);
        return chosen;
    }
    case AnswerType::SingleSelect:
        return rng.pick(q.options).id;
    default:
        return q.default_answer;
    }
}

Session random_session(std::uint64_t seed) {
    gen::Rng rng(seed);
    Session s = Session::start(model(), "p", fixture::milk_before(), fixture::milk_after());
    while (!s.complete()) {
        Session prior = s;
        std::string before = dump(to_json(prior));
        s = s.answer(model(), random_answer(rng, *s.pending()));
        REQUIRE(dump(to_json(prior)) == before);
        REQUIRE(s.version() == prior.version() + 1);
    }
    return s;
}

}  // namespace

TEST_CASE("membership agrees with the definitional oracle") {
    const Ontology &o = model().ontology;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        gen::Rng rng(seed);
        for (int i = 0; i < 1500; ++i) {
            auto c = gen::membership_case(rng, o);
            INFO("seed " << seed << " case " << i << ": " << dump(to_json(c.variation)));
            REQUIRE(contains(o, c.variation, c.value) == oracle::member(o, c.variation, c.value));
        }
    }
}

TEST_CASE("comparison verdicts equal membership") {
    const Ontology &o = model().ontology;
    gen::Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        auto c = gen::membership_case(rng, o);
        Comparison cmp = compare_to_variation(o, c.value, c.variation);
        INFO(dump(to_json(c.variation)));
        REQUIRE(cmp.equal == contains(o, c.variation, c.value));
        if (!cmp.equal)
            CHECK((!cmp.reasons.empty() || !cmp.sub_comparisons.empty()));
    }
}

TEST_CASE("collection matching finds an injective assignment exactly when one exists") {
    const Ontology &o = model().ontology;
    gen::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        auto c = gen::collection_case(rng, o);
        KeyedValues elements;
        for (const auto &e : c.elements)
            elements.emplace_back(e.id, Value::instance(e));
        auto fits = [&](std::size_t r, std::size_t col) {
            return oracle::member(o, c.variation.elements[r], elements[col].second);
        };
        bool exists = oracle::injective_assignment(c.variation.elements.size(), elements.size(), fits).has_value();
        MatchResult got = collection_member(o, elements, c.variation);
        REQUIRE(got.satisfied == exists);
        if (!got.satisfied)
            CHECK_FALSE(got.failure_witness.empty());
    }
}

TEST_CASE("selected assignments equal the exhaustive optimum") {
    gen::Rng rng(6);
    for (int i = 0; i < 2000; ++i) {
        Costs costs = random_costs(rng);
        oracle::BestAssignment best = oracle::min_cost_assignment(costs);
        Assignment got = select_assignment(costs);
        REQUIRE(got.pairs.size() == best.pairs);
        REQUIRE(got.total_cost == best.cost);
        for (std::size_t r = 0; r < costs.size(); ++r) {
            auto it = got.pairs.find(r);
            std::optional<std::size_t> col = it == got.pairs.end() ? std::nullopt : std::optional(it->second);
            REQUIRE(col == best.columns[r]);
        }
    }
}

TEST_CASE("plans exist exactly when the feasibility oracle allows one and they work") {
    const Model &m = model();
    for (std::uint64_t seed : {11u, 12u}) {
        gen::Rng rng(seed);
        for (int i = 0; i < 250; ++i) {
            gen::PlanningCase c = gen::planning_case(rng);
            EnvironmentState env = fixture::environment(c.containers);
            std::string before = dump(to_json(env));
            Variation goal = fixture::level_goal(c.goal_concept, c.target_variation);
            bool feasible = oracle::content_level_feasible(m.ontology, c.containers, c.goal_concept, c.target);
            PlanResult r = plan(m, env, goal);
            INFO("seed " << seed << " case " << i << " goal " << dump(to_json(goal)) << " env " << before);
            REQUIRE(r.satisfiable == feasible);
            REQUIRE(dump(to_json(env)) == before);
            if (!r.satisfiable)
                continue;
            ExecutionTrace t = execute(m, r.plan, env, goal);
            REQUIRE(t.verdict == Verdict::Satisfied);
            CHECK(t.entries.size() == r.plan.step_count());
            CHECK(std::fabs(fixture::total_liquid(t.final_env) - fixture::total_liquid(env)) <= 1e-9);
            for (const auto &[id, inst] : t.final_env.instances()) {
                if (!inst.values.count(kContentLevel))
                    continue;
                double level = get_value(t.final_env, id, kContentLevel).as_number();
                double volume = get_value(t.final_env, id, "contentVolume").as_number();
                CHECK(level >= -1e-9);
                CHECK(level <= volume + 1e-9);
            }
        }
    }
}

TEST_CASE("variation documents round trip") {
    const Ontology &o = model().ontology;
    gen::Rng rng(8);
    for (int i = 0; i < 800; ++i) {
        Variation v = i % 2 ? gen::numeric_variation(rng, 3) : gen::membership_case(rng, o).variation;
        Json doc = to_json(v);
        Variation back = variation_from_json(parse_json(dump(doc)));
        INFO(dump(doc) << " became " << dump(to_json(back)));
        REQUIRE(variations_equal(back, v, 0.0));
        REQUIRE(dump(to_json(back)) == dump(doc));
    }
}

TEST_CASE("random sessions stay within the bound and accept the demonstration") {
    const Model &m = model();
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        Session s = random_session(seed);
        INFO("seed " << seed << " result " << dump(to_json(*s.result())));
        CHECK(s.transcript().size() <= s.bound());
        CHECK(check_variation(m.ontology, *s.result(), ValueKind::Environment).empty());
        CHECK(contains(m.ontology, *s.result(), Value::environment(fixture::milk_after())));
        CHECK(dump(transcript_to_json(random_session(seed))) == dump(transcript_to_json(s)));
    }
}
