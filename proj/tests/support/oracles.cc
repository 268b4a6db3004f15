#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace oracle {

using namespace goalvar;

namespace {

constexpr double kTol = 1e-9;

bool number_member(const Variation &v, double x) {
    if (v.is<EmptyVariation>())
        return false;
    if (v.is<WholeVariation>())
        return true;
    if (auto f = v.get_if<FixedVariation>())
        return std::fabs(x - f->value.as_number()) <= kTol;
    if (auto i = v.get_if<IntervalVariation>()) {
        bool above = i->lower_closed ? x >= i->lower - kTol : x > i->lower;
        bool below = i->upper_closed ? x <= i->upper + kTol : x < i->upper;
        return above && below;
    }
    if (auto u = v.get_if<UnionVariation>()) {
        for (const auto &m : u->members)
            if (number_member(m, x))
                return true;
        return false;
    }
    if (auto n = v.get_if<IntersectionVariation>()) {
        for (const auto &m : n->members)
            if (!number_member(m, x))
                return false;
        return true;
    }
    throw std::logic_error("not a numeric variation");
}

// Angle of the relative rotation conj(a) * b.
double relative_angle(const Pose &a, const Pose &b) {
    const auto &p = a.orientation;
    const auto &q = b.orientation;
    double w = p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3];
    double x = p[0] * q[1] - p[1] * q[0] - p[2] * q[3] + p[3] * q[2];
    double y = p[0] * q[2] + p[1] * q[3] - p[2] * q[0] - p[3] * q[1];
    double z = p[0] * q[3] - p[1] * q[2] + p[2] * q[1] - p[3] * q[0];
    return 2.0 * std::atan2(std::sqrt(x * x + y * y + z * z), std::fabs(w));
}

bool concept_fits(const Ontology &ontology, const ConceptVariation &cv, const std::string &id) {
    return cv.include_subconcepts ? subconcept(ontology, id, cv.base) : id == cv.base;
}

}  // namespace

bool subconcept(const Ontology &ontology, const std::string &a, const std::string &b) {
    std::deque<std::string> queue{a};
    std::set<std::string> seen;
    while (!queue.empty()) {
        std::string c = queue.front();
        queue.pop_front();
        if (c == b)
            return true;
        if (!seen.insert(c).second || !ontology.has_concept(c))
            continue;
        for (const auto &p : ontology.get_concept(c).parents)
            queue.push_back(p);
    }
    return false;
}

bool member(const Ontology &ontology, const Variation &v, const Value &value) {
    switch (value.kind()) {
    case ValueKind::Number:
    case ValueKind::Integer:
        return number_member(v, value.as_number());
    case ValueKind::Boolean:
        if (auto f = v.get_if<FixedVariation>())
            return f->value.as_boolean() == value.as_boolean();
        return v.is<WholeVariation>();
    case ValueKind::ConceptRef:
        if (auto cv = v.get_if<ConceptVariation>())
            return concept_fits(ontology, *cv, value.as_concept());
        return v.is<WholeVariation>();
    case ValueKind::Pose: {
        if (v.is<WholeVariation>())
            return true;
        const auto *ball = v.get_if<BallVariation>();
        if (!ball)
            throw std::logic_error("unsupported pose variation");
        const Pose &p = value.as_pose();
        double dx = p.position[0] - ball->center.position[0];
        double dy = p.position[1] - ball->center.position[1];
        double dz = p.position[2] - ball->center.position[2];
        return std::hypot(dx, dy, dz) <= ball->max_distance + kTol &&
               relative_angle(ball->center, p) <= ball->max_angle + kTol;
    }
    case ValueKind::Instance: {
        const auto *ipv = v.get_if<InstancePropertiesVariation>();
        if (!ipv)
            throw std::logic_error("unsupported instance variation");
        const Instance &instance = value.as_instance();
        if (!concept_fits(ontology, ipv->concept_variation, instance.concept_id))
            return false;
        for (const auto &[name, pv] : ipv->properties) {
            auto it = instance.values.find(name);
            if (it == instance.values.end() || !member(ontology, pv, it->second))
                return false;
        }
        return true;
    }
    default:
        throw std::logic_error("unsupported value kind");
    }
}

std::optional<std::vector<std::size_t>> injective_assignment(
    std::size_t rows, std::size_t columns, const std::function<bool(std::size_t, std::size_t)> &fits) {
    if (rows > columns)
        return std::nullopt;
    std::vector<std::size_t> pick(rows);
    std::vector<bool> used(columns, false);
    std::function<bool(std::size_t)> search = [&](std::size_t r) {
        if (r == rows)
            return true;
        for (std::size_t c = 0; c < columns; ++c) {
            if (used[c] || !fits(r, c))
                continue;
            used[c] = true;
            pick[r] = c;
            if (search(r + 1))
                return true;
            used[c] = false;
        }
        return false;
    };
    if (search(0))
        return pick;
    return std::nullopt;
}

BestAssignment min_cost_assignment(const std::vector<std::vector<std::optional<std::size_t>>> &costs) {
    const std::size_t rows = costs.size();
    const std::size_t columns = rows ? costs[0].size() : 0;
    BestAssignment best;
    best.columns.assign(rows, std::nullopt);
    bool have = false;

    // Sort key for the tie-break: unassigned is larger than every column.
    auto key = [&](const std::vector<std::optional<std::size_t>> &a) {
        std::vector<std::size_t> k;
        for (const auto &c : a)
            k.push_back(c ? *c : columns);
        return k;
    };

    std::vector<std::optional<std::size_t>> current(rows);
    std::vector<bool> used(columns, false);
    std::function<void(std::size_t, std::size_t, std::size_t)> walk = [&](std::size_t r, std::size_t pairs,
                                                                           std::size_t cost) {
        if (r == rows) {
            bool better = !have || pairs > best.pairs || (pairs == best.pairs && cost < best.cost) ||
                          (pairs == best.pairs && cost == best.cost && key(current) < key(best.columns));
            if (better) {
                best = {current, pairs, cost};
                have = true;
            }
            return;
        }
        current[r] = std::nullopt;
        walk(r + 1, pairs, cost);
        for (std::size_t c = 0; c < columns; ++c) {
            if (used[c] || !costs[r][c])
                continue;
            used[c] = true;
            current[r] = c;
            walk(r + 1, pairs + 1, cost + *costs[r][c]);
            used[c] = false;
        }
        current[r] = std::nullopt;
    };
    walk(0, 0, 0);
    return best;
}

bool content_level_feasible(const Ontology &ontology, const std::vector<UnitContainer> &containers,
                            const std::string &goal_concept, const std::vector<UnitInterval> &target) {
    for (std::size_t i = 0; i < containers.size(); ++i) {
        const UnitContainer &c = containers[i];
        if (!subconcept(ontology, c.concept_id, goal_concept))
            continue;
        long held = 0;
        long free = 0;
        for (std::size_t j = 0; j < containers.size(); ++j) {
            if (j == i)
                continue;
            held += containers[j].level;
            free += containers[j].volume - containers[j].level;
        }
        long a = std::max(0L, c.level - free);
        long b = std::min(c.volume, c.level + held);
        for (const UnitInterval &t : target) {
            // Lower end of the intersection and whether it is attained.
            long lo = std::max(a, t.lower);
            bool lo_closed = a > t.lower || t.lower_closed;
            long hi = std::min(b, t.upper);
            bool hi_closed = b < t.upper || t.upper_closed;
            if (lo < hi || (lo == hi && lo_closed && hi_closed))
                return true;
        }
    }
    return false;
}

}  // namespace oracle
