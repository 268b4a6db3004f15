#ifndef GOALVAR_MATCHING_H
#define GOALVAR_MATCHING_H

#include "goalvar/comparison.h"
#include "goalvar/kb.h"
#include "goalvar/variation.h"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace goalvar {

struct MatchResult {
    bool satisfied = false;
    // element-variation index -> element key (instance id); injective.
    std::map<std::size_t, std::string> assignment;
    // For every unmatched element variation: its comparison against each
    // collection element.
    std::map<std::size_t, std::vector<Comparison>> failure_witness;
};

using KeyedValues = std::vector<std::pair<std::string, Value>>;

// Injective assignment of element variations to distinct elements, found by
// maximum bipartite matching with augmenting paths.
MatchResult collection_member(const Ontology &ontology, const KeyedValues &elements,
                              const CollectionSubsetVariation &type_a);
MatchResult collection_member(const Ontology &ontology, const EnvironmentState &env,
                              const CollectionSubsetVariation &type_a);

KeyedValues instance_values(const EnvironmentState &env);

struct CandidateDifferences {
    std::string instance;
    bool member = false;
    // Empty when `member`.
    std::vector<PropertyDifference> differences;
};

struct ElementDifferences {
    std::size_t index = 0;
    // Concept-compatible instances, in id order.
    std::vector<CandidateDifferences> candidates;
    // Set when no instance is concept-compatible.
    std::optional<Reason> missing;
};

struct EnvironmentComparison {
    std::vector<ElementDifferences> elements;
    MatchResult match;
};

// Why (and where) an environment falls outside a goal variation: per element
// variation, the differences blocking every concept-compatible candidate.
EnvironmentComparison compare_environment(const Ontology &ontology, const EnvironmentState &env,
                                          const EnvironmentVariation &goal);

}  // namespace goalvar

#endif
