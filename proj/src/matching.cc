#include "goalvar/matching.h"

#include "bipartite.h"

namespace goalvar {

KeyedValues instance_values(const EnvironmentState &env) {
    KeyedValues out;
    out.reserve(env.size());
    for (const auto &[id, instance] : env.instances())
        out.emplace_back(id, Value::instance(instance));
    return out;
}

MatchResult collection_member(const Ontology &ontology, const KeyedValues &elements,
                              const CollectionSubsetVariation &type_a) {
    const std::size_t rows = type_a.elements.size();
    const std::size_t cols = elements.size();

    std::vector<std::vector<std::size_t>> adjacency(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (contains(ontology, type_a.elements[r], elements[c].second))
                adjacency[r].push_back(c);

    std::vector<int> owner = detail::max_bipartite_matching(adjacency, cols);
    MatchResult result;
    for (std::size_t c = 0; c < cols; ++c)
        if (owner[c] >= 0)
            result.assignment.emplace(static_cast<std::size_t>(owner[c]), elements[c].first);

    result.satisfied = result.assignment.size() == rows;
    for (std::size_t r = 0; r < rows; ++r) {
        if (result.assignment.count(r))
            continue;
        auto &witness = result.failure_witness[r];
        for (const auto &[key, element] : elements)
            witness.push_back(compare_to_variation(ontology, element, type_a.elements[r], key));
    }
    return result;
}

MatchResult collection_member(const Ontology &ontology, const EnvironmentState &env,
                              const CollectionSubsetVariation &type_a) {
    return collection_member(ontology, instance_values(env), type_a);
}

EnvironmentComparison compare_environment(const Ontology &ontology, const EnvironmentState &env,
                                          const EnvironmentVariation &goal) {
    EnvironmentComparison out;
    out.match = collection_member(ontology, env, goal.entities);

    for (std::size_t index = 0; index < goal.entities.elements.size(); ++index) {
        const Variation &element = goal.entities.elements[index];
        ElementDifferences diffs;
        diffs.index = index;
        const auto *ipv = element.get_if<InstancePropertiesVariation>();

        for (const auto &[id, instance] : env.instances()) {
            Value as_value = Value::instance(instance);
            if (ipv) {
                if (!contains(ontology, Variation(ipv->concept_variation), as_value))
                    continue;
                CandidateDifferences cand{id, true, {}};
                for (const auto &[name, target] : ipv->properties) {
                    auto it = instance.values.find(name);
                    if (it == instance.values.end()) {
                        cand.member = false;
                        continue;
                    }
                    Comparison cmp = compare_to_variation(ontology, it->second, target, name);
                    if (cmp.equal)
                        continue;
                    cand.member = false;
                    cand.differences.push_back(PropertyDifference{id, instance.concept_id, name,
                                                                  it->second, target, std::move(cmp)});
                }
                diffs.candidates.push_back(std::move(cand));
            } else {
                diffs.candidates.push_back({id, contains(ontology, element, as_value), {}});
            }
        }
        if (diffs.candidates.empty()) {
            diffs.missing = Reason{ReasonKind::MissingElement,
                                   Predicate{"Exists",
                                             {Value::integer(static_cast<std::int64_t>(index))},
                                             true,
                                             false}};
        }
        out.elements.push_back(std::move(diffs));
    }
    return out;
}

}  // namespace goalvar
