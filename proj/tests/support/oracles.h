#ifndef GOALVAR_TESTS_ORACLES_H
#define GOALVAR_TESTS_ORACLES_H

// Reference implementations written from the definitions, without sharing
// code with the library. Slow on purpose.

#include "goalvar/kb.h"
#include "goalvar/variation.h"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// Reflexive-transitive parent walk over the concept definitions.
bool subconcept(const goalvar::Ontology &ontology, const std::string &a, const std::string &b);

// Membership straight from the definition: closed bounds and fixed numbers
// within 1e-9, open bounds strict, unions any, intersections all. Handles
// numeric, boolean, concept, pose-ball and instance-property variations.
bool member(const goalvar::Ontology &ontology, const goalvar::Variation &variation,
            const goalvar::Value &value);

// Exhaustive search for an injective map from `rows` variations to `columns`
// elements where fits(row, column) holds. Returns the first map found in
// lexicographic order.
std::optional<std::vector<std::size_t>> injective_assignment(
    std::size_t rows, std::size_t columns, const std::function<bool(std::size_t, std::size_t)> &fits);

// Enumerates every partial injective assignment over finite costs and keeps
// the best by (more pairs, lower cost, lexicographically smaller row ->
// column vector with "unassigned" ordered last).
struct BestAssignment {
    std::vector<std::optional<std::size_t>> columns;  // per row
    std::size_t pairs = 0;
    std::size_t cost = 0;
};
BestAssignment min_cost_assignment(const std::vector<std::vector<std::optional<std::size_t>>> &costs);

// Content-level feasibility in exact integer arithmetic. Quantities are in
// units of 0.005 L.
struct UnitContainer {
    std::string id;
    std::string concept_id;
    long level = 0;
    long volume = 0;
};

struct UnitInterval {
    long lower = 0;
    bool lower_closed = true;
    long upper = 0;
    bool upper_closed = true;
};

// True when some container compatible with `goal_concept` can reach a level
// inside one of `target` by pouring from or into the others: the reachable
// levels of c are [cL - free(others), cL + held(others)] cut to [0, cV].
bool content_level_feasible(const goalvar::Ontology &ontology, const std::vector<UnitContainer> &containers,
                            const std::string &goal_concept, const std::vector<UnitInterval> &target);

}  // namespace oracle

#endif
