#ifndef GOALVAR_TESTS_GENERATORS_H
#define GOALVAR_TESTS_GENERATORS_H

#include "oracles.h"

#include "goalvar/model.h"
#include "goalvar/variation.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
    template <typename T>
    const T &pick(const std::vector<T> &items) {
        return items[static_cast<std::size_t>(integer(0, static_cast<long>(items.size()) - 1))];
    }
    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// Numeric variation with bounds on a 0.05 grid over [0, 1], up to `depth`
// levels of unions and intersections.
goalvar::Variation numeric_variation(Rng &rng, int depth = 2);
// A number on or next to a grid point of `v` (or anywhere on the grid).
double probe_near(Rng &rng, const goalvar::Variation &v);

// Any variation the membership oracle understands, paired with a value of
// its domain.
struct MembershipCase {
    goalvar::Variation variation;
    goalvar::Value value;
};
MembershipCase membership_case(Rng &rng, const goalvar::Ontology &ontology);

// Container concepts used by random scenarios.
const std::vector<std::string> &container_concepts();
const std::vector<std::string> &goal_concepts();

goalvar::Instance container(const goalvar::Ontology &ontology, const std::string &id,
                            const std::string &concept_id, double level, double volume);

// 1..5 container instances plus a random type-A variation of 1..4 elements.
struct CollectionCase {
    std::vector<goalvar::Instance> elements;
    goalvar::CollectionSubsetVariation variation;
};
CollectionCase collection_case(Rng &rng, const goalvar::Ontology &ontology);

// Single-variation content-level scenario on a 0.01 L grid with up to six
// containers. Open target bounds sit between grid points.
struct PlanningCase {
    std::vector<oracle::UnitContainer> containers;
    std::string goal_concept;
    std::vector<oracle::UnitInterval> target;
    goalvar::Variation target_variation;
};
PlanningCase planning_case(Rng &rng);

double liters(long units);

}  // namespace gen

#endif
