#include "goalvar/variation.h"

#include "bipartite.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace goalvar {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool interval_is_empty(const IntervalVariation &i) {
    if (i.lower > i.upper)
        return true;
    return i.lower == i.upper && !(i.lower_closed && i.upper_closed);
}

[[noreturn]] void mismatch(std::string_view variation, const Value &value) {
    throw DomainMismatchError(std::string(variation) + " variation cannot contain a " +
                              std::string(to_string(value.kind())) + " value");
}

bool concept_matches(const Ontology &ontology, const ConceptVariation &cv, const std::string &id) {
    if (!cv.include_subconcepts)
        return id == cv.base;
    if (!ontology.has_concept(id) || !ontology.has_concept(cv.base))
        return id == cv.base;
    return ontology.is_subconcept(id, cv.base);
}

bool ball_contains(const BallVariation &ball, const Value &value) {
    const Pose *pose = nullptr;
    if (value.kind() == ValueKind::Location) {
        if (!ball.reference)
            mismatch("Pose ball", value);
        if (value.as_location().reference != *ball.reference)
            return false;
        pose = &value.as_location().delta;
    } else if (value.kind() == ValueKind::Pose) {
        if (ball.reference)
            mismatch("Location ball", value);
        pose = &value.as_pose();
    } else {
        mismatch("BallInterval", value);
    }
    return position_distance(*pose, ball.center) <= ball.max_distance + kEpsilon &&
           rotation_angle(*pose, ball.center) <= ball.max_angle + kEpsilon;
}

bool member_of_collection(const Ontology &ontology, const CollectionSubsetVariation &subset,
                          const std::vector<Value> &elements);

}  // namespace

std::string_view type_name(const Variation &variation) {
    return std::visit(overloaded{
                          [](const EmptyVariation &) { return std::string_view("Empty"); },
                          [](const WholeVariation &) { return std::string_view("Whole"); },
                          [](const FixedVariation &) { return std::string_view("Fixed"); },
                          [](const IntervalVariation &) { return std::string_view("Interval"); },
                          [](const UnionVariation &) { return std::string_view("Union"); },
                          [](const IntersectionVariation &) { return std::string_view("Intersection"); },
                          [](const ConceptVariation &) { return std::string_view("ConceptRangeVariation"); },
                          [](const BallVariation &) { return std::string_view("BallInterval"); },
                          [](const InstancePropertiesVariation &) {
                              return std::string_view("InstanceRangePropertiesVariation");
                          },
                          [](const CollectionSubsetVariation &) {
                              return std::string_view("MapRangeInstanceSubset");
                          },
                          [](const EnvironmentVariation &) {
                              return std::string_view("EnvironmentDataRangeEntityVariation");
                          },
                      },
                      variation.node());
}

bool variations_equal(const Variation &a, const Variation &b, double eps) {
    if (a.node().index() != b.node().index())
        return false;
    auto list_equal = [eps](const std::vector<Variation> &x, const std::vector<Variation> &y) {
        if (x.size() != y.size())
            return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!variations_equal(x[i], y[i], eps))
                return false;
        return true;
    };
    return std::visit(
        overloaded{
            [](const EmptyVariation &) { return true; },
            [](const WholeVariation &) { return true; },
            [&](const FixedVariation &x) {
                return values_equal(x.value, b.get_if<FixedVariation>()->value, eps);
            },
            [&](const IntervalVariation &x) {
                const auto &y = *b.get_if<IntervalVariation>();
                // Equal infinities first: inf - inf is NaN.
                auto near = [eps](double p, double q) { return p == q || std::fabs(p - q) <= eps; };
                return near(x.lower, y.lower) && near(x.upper, y.upper) &&
                       x.lower_closed == y.lower_closed && x.upper_closed == y.upper_closed;
            },
            [&](const UnionVariation &x) {
                return list_equal(x.members, b.get_if<UnionVariation>()->members);
            },
            [&](const IntersectionVariation &x) {
                return list_equal(x.members, b.get_if<IntersectionVariation>()->members);
            },
            [&](const ConceptVariation &x) {
                const auto &y = *b.get_if<ConceptVariation>();
                return x.base == y.base && x.include_subconcepts == y.include_subconcepts;
            },
            [&](const BallVariation &x) {
                const auto &y = *b.get_if<BallVariation>();
                return x.reference == y.reference && poses_equal(x.center, y.center, eps) &&
                       std::fabs(x.max_distance - y.max_distance) <= eps &&
                       std::fabs(x.max_angle - y.max_angle) <= eps;
            },
            [&](const InstancePropertiesVariation &x) {
                const auto &y = *b.get_if<InstancePropertiesVariation>();
                if (x.concept_variation.base != y.concept_variation.base ||
                    x.concept_variation.include_subconcepts != y.concept_variation.include_subconcepts ||
                    x.properties.size() != y.properties.size())
                    return false;
                for (const auto &[name, v] : x.properties) {
                    auto it = y.properties.find(name);
                    if (it == y.properties.end() || !variations_equal(v, it->second, eps))
                        return false;
                }
                return true;
            },
            [&](const CollectionSubsetVariation &x) {
                return list_equal(x.elements, b.get_if<CollectionSubsetVariation>()->elements);
            },
            [&](const EnvironmentVariation &x) {
                return list_equal(x.entities.elements,
                                  b.get_if<EnvironmentVariation>()->entities.elements);
            },
        },
        a.node());
}

bool interval_contains(const IntervalVariation &i, double x) {
    bool above = i.lower_closed ? x >= i.lower - kEpsilon : x > i.lower;
    bool below = i.upper_closed ? x <= i.upper + kEpsilon : x < i.upper;
    return above && below;
}

bool contains(const Ontology &ontology, const Variation &variation, const Value &value) {
    return std::visit(
        overloaded{
            [](const EmptyVariation &) { return false; },
            [](const WholeVariation &) { return true; },
            [&](const FixedVariation &f) {
                if (f.value.kind() != value.kind())
                    mismatch("Fixed " + std::string(to_string(f.value.kind())), value);
                return values_equal(value, f.value);
            },
            [&](const IntervalVariation &i) {
                if (!is_numeric(value.kind()))
                    mismatch("Interval", value);
                return interval_contains(i, value.as_number());
            },
            [&](const UnionVariation &u) {
                bool any = false;
                for (const auto &m : u.members)
                    any = contains(ontology, m, value) || any;
                return any;
            },
            [&](const IntersectionVariation &u) {
                bool all = true;
                for (const auto &m : u.members)
                    all = contains(ontology, m, value) && all;
                return all;
            },
            [&](const ConceptVariation &cv) {
                if (value.kind() == ValueKind::ConceptRef)
                    return concept_matches(ontology, cv, value.as_concept());
                if (value.kind() == ValueKind::Instance)
                    return concept_matches(ontology, cv, value.as_instance().concept_id);
                mismatch("ConceptRangeVariation", value);
            },
            [&](const BallVariation &ball) { return ball_contains(ball, value); },
            [&](const InstancePropertiesVariation &ipv) {
                if (value.kind() != ValueKind::Instance)
                    mismatch("InstanceRangePropertiesVariation", value);
                const Instance &instance = value.as_instance();
                if (!concept_matches(ontology, ipv.concept_variation, instance.concept_id))
                    return false;
                for (const auto &[name, v] : ipv.properties) {
                    auto it = instance.values.find(name);
                    if (it == instance.values.end() || !contains(ontology, v, it->second))
                        return false;
                }
                return true;
            },
            [&](const CollectionSubsetVariation &subset) {
                std::vector<Value> elements;
                if (value.kind() == ValueKind::Collection) {
                    for (const auto &[key, element] : value.as_collection().elements)
                        elements.push_back(element);
                } else if (value.kind() == ValueKind::Environment) {
                    for (const auto &[id, instance] : value.as_environment().instances())
                        elements.push_back(Value::instance(instance));
                } else {
                    mismatch("MapRangeInstanceSubset", value);
                }
                return member_of_collection(ontology, subset, elements);
            },
            [&](const EnvironmentVariation &ev) {
                if (value.kind() != ValueKind::Environment)
                    mismatch("EnvironmentDataRangeEntityVariation", value);
                return contains(ontology, Variation(ev.entities), value);
            },
        },
        variation.node());
}

namespace {

bool member_of_collection(const Ontology &ontology, const CollectionSubsetVariation &subset,
                          const std::vector<Value> &elements) {
    const std::size_t rows = subset.elements.size();
    if (rows > elements.size())
        return false;
    std::vector<std::vector<std::size_t>> adjacency(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < elements.size(); ++c)
            if (contains(ontology, subset.elements[r], elements[c]))
                adjacency[r].push_back(c);

    std::vector<int> owner = detail::max_bipartite_matching(adjacency, elements.size());
    std::size_t matched = 0;
    for (int o : owner)
        matched += o >= 0;
    return matched == rows;
}

std::vector<IntervalVariation> normalize(std::vector<IntervalVariation> parts) {
    parts.erase(std::remove_if(parts.begin(), parts.end(), interval_is_empty), parts.end());
    std::sort(parts.begin(), parts.end(), [](const IntervalVariation &a, const IntervalVariation &b) {
        if (a.lower != b.lower)
            return a.lower < b.lower;
        return a.lower_closed && !b.lower_closed;
    });
    std::vector<IntervalVariation> merged;
    for (const auto &part : parts) {
        if (!merged.empty()) {
            auto &last = merged.back();
            bool touches = part.lower < last.upper ||
                           (part.lower == last.upper && (part.lower_closed || last.upper_closed));
            if (touches) {
                if (part.upper > last.upper) {
                    last.upper = part.upper;
                    last.upper_closed = part.upper_closed;
                } else if (part.upper == last.upper) {
                    last.upper_closed = last.upper_closed || part.upper_closed;
                }
                continue;
            }
        }
        merged.push_back(part);
    }
    return merged;
}

}  // namespace

IntervalSet IntervalSet::whole() {
    IntervalSet s;
    s.components_.push_back({-kInf, false, kInf, false});
    return s;
}

IntervalSet IntervalSet::of(const IntervalVariation &interval) {
    IntervalSet s;
    s.components_ = normalize({interval});
    return s;
}

IntervalSet IntervalSet::from_variation(const Variation &variation) {
    return std::visit(
        overloaded{
            [](const EmptyVariation &) { return IntervalSet::empty(); },
            [](const WholeVariation &) { return IntervalSet::whole(); },
            [](const FixedVariation &f) {
                if (!is_numeric(f.value.kind()))
                    mismatch("numeric", f.value);
                double x = f.value.as_number();
                return IntervalSet::of({x, true, x, true});
            },
            [](const IntervalVariation &i) { return IntervalSet::of(i); },
            [](const UnionVariation &u) {
                IntervalSet s;
                for (const auto &m : u.members)
                    s = s.unite(from_variation(m));
                return s;
            },
            [](const IntersectionVariation &u) {
                IntervalSet s = IntervalSet::whole();
                for (const auto &m : u.members)
                    s = s.intersect(from_variation(m));
                return s;
            },
            [&](const auto &) -> IntervalSet {
                throw DomainMismatchError(std::string(type_name(variation)) +
                                          " is not a numeric variation");
            },
        },
        variation.node());
}

IntervalSet IntervalSet::unite(const IntervalSet &other) const {
    auto parts = components_;
    parts.insert(parts.end(), other.components_.begin(), other.components_.end());
    IntervalSet s;
    s.components_ = normalize(std::move(parts));
    return s;
}

IntervalSet IntervalSet::intersect(const IntervalSet &other) const {
    std::vector<IntervalVariation> parts;
    for (const auto &a : components_) {
        for (const auto &b : other.components_) {
            IntervalVariation c;
            if (a.lower > b.lower) {
                c.lower = a.lower;
                c.lower_closed = a.lower_closed;
            } else if (b.lower > a.lower) {
                c.lower = b.lower;
                c.lower_closed = b.lower_closed;
            } else {
                c.lower = a.lower;
                c.lower_closed = a.lower_closed && b.lower_closed;
            }
            if (a.upper < b.upper) {
                c.upper = a.upper;
                c.upper_closed = a.upper_closed;
            } else if (b.upper < a.upper) {
                c.upper = b.upper;
                c.upper_closed = b.upper_closed;
            } else {
                c.upper = a.upper;
                c.upper_closed = a.upper_closed && b.upper_closed;
            }
            parts.push_back(c);
        }
    }
    IntervalSet s;
    s.components_ = normalize(std::move(parts));
    return s;
}

bool IntervalSet::contains(double x) const {
    return std::any_of(components_.begin(), components_.end(),
                       [x](const IntervalVariation &i) { return interval_contains(i, x); });
}

Variation IntervalSet::to_variation() const {
    if (components_.empty())
        return Variation::empty();
    if (components_.size() == 1) {
        const auto &c = components_.front();
        if (std::isinf(c.lower) && std::isinf(c.upper))
            return Variation::whole();
        return c;
    }
    std::vector<Variation> members(components_.begin(), components_.end());
    return Variation::any_of(std::move(members));
}

std::vector<double> nearest_targets(const Variation &numeric_variation, double current) {
    IntervalSet set = IntervalSet::from_variation(numeric_variation);
    if (set.is_empty())
        throw EmptyVariationError("variation has no attainable value");

    std::vector<double> targets;
    for (const auto &c : set.components()) {
        double point;
        if (interval_contains(c, current)) {
            point = current;
        } else if (current < c.lower || (current == c.lower && !c.lower_closed)) {
            point = c.lower_closed ? c.lower : c.lower + kEpsilon;
        } else {
            point = c.upper_closed ? c.upper : c.upper - kEpsilon;
        }
        // Degenerate open components narrower than the nudge have no
        // representable inner point.
        if (!interval_contains(c, point))
            continue;
        targets.push_back(point);
    }
    if (targets.empty())
        throw EmptyVariationError("variation has no attainable value");
    std::stable_sort(targets.begin(), targets.end(), [current](double a, double b) {
        double da = std::fabs(a - current);
        double db = std::fabs(b - current);
        if (std::fabs(da - db) > kEpsilon)
            return da < db;
        return a < b;
    });
    return targets;
}

std::vector<Issue> check_variation(const Ontology &ontology, const Variation &variation,
                                   ValueKind domain, const std::string &path) {
    std::vector<Issue> issues;
    auto expect = [&](bool ok, const std::string &what) {
        if (!ok)
            issues.push_back({path, std::string(type_name(variation)) + " is not valid under a " +
                                        std::string(to_string(domain)) + " domain" +
                                        (what.empty() ? "" : ": " + what)});
        return ok;
    };
    auto append = [&](std::vector<Issue> more) {
        issues.insert(issues.end(), more.begin(), more.end());
    };
    auto check_concept = [&](const ConceptVariation &cv, const std::string &at) {
        if (!ontology.has_concept(cv.base))
            issues.push_back({at, "unknown concept '" + cv.base + "'"});
    };

    std::visit(
        overloaded{
            [](const EmptyVariation &) {},
            [](const WholeVariation &) {},
            [&](const FixedVariation &f) {
                expect(f.value.kind() == domain, "value is " + std::string(to_string(f.value.kind())));
            },
            [&](const IntervalVariation &i) {
                if (!expect(is_numeric(domain), ""))
                    return;
                if (std::isnan(i.lower) || std::isnan(i.upper))
                    issues.push_back({path, "interval bound is NaN"});
                else if (i.lower > i.upper)
                    issues.push_back({path, "lower bound exceeds upper bound"});
                else if (i.lower == i.upper && !(i.lower_closed && i.upper_closed))
                    issues.push_back({path, "equal bounds must both be closed"});
            },
            [&](const UnionVariation &u) {
                for (std::size_t k = 0; k < u.members.size(); ++k)
                    append(check_variation(ontology, u.members[k], domain,
                                           path + ".members[" + std::to_string(k) + "]"));
            },
            [&](const IntersectionVariation &u) {
                for (std::size_t k = 0; k < u.members.size(); ++k)
                    append(check_variation(ontology, u.members[k], domain,
                                           path + ".members[" + std::to_string(k) + "]"));
            },
            [&](const ConceptVariation &cv) {
                if (expect(domain == ValueKind::ConceptRef || domain == ValueKind::Instance, ""))
                    check_concept(cv, path);
            },
            [&](const BallVariation &ball) {
                bool ok = ball.reference ? domain == ValueKind::Location : domain == ValueKind::Pose;
                if (!expect(ok, ""))
                    return;
                if (ball.max_distance < 0.0 || ball.max_angle < 0.0)
                    issues.push_back({path, "ball radius must be non-negative"});
                if (std::fabs(ball.center.quaternion_norm() - 1.0) > kEpsilon)
                    issues.push_back({path, "center orientation is not a unit quaternion"});
            },
            [&](const InstancePropertiesVariation &ipv) {
                if (!expect(domain == ValueKind::Instance, ""))
                    return;
                check_concept(ipv.concept_variation, path + ".concept");
                if (!ontology.has_concept(ipv.concept_variation.base))
                    return;
                for (const auto &[name, v] : ipv.properties) {
                    std::string at = path + ".properties." + name;
                    const PropertyDef *def = ontology.find_property(ipv.concept_variation.base, name);
                    if (!def) {
                        issues.push_back({at, "concept '" + ipv.concept_variation.base +
                                                  "' has no property '" + name + "'"});
                        continue;
                    }
                    append(check_variation(ontology, v, def->domain, at));
                }
            },
            [&](const CollectionSubsetVariation &subset) {
                if (!expect(domain == ValueKind::Collection || domain == ValueKind::Environment, ""))
                    return;
                for (std::size_t k = 0; k < subset.elements.size(); ++k)
                    append(check_variation(ontology, subset.elements[k], ValueKind::Instance,
                                           path + ".elements[" + std::to_string(k) + "]"));
            },
            [&](const EnvironmentVariation &ev) {
                if (!expect(domain == ValueKind::Environment, ""))
                    return;
                append(check_variation(ontology, Variation(ev.entities), ValueKind::Environment,
                                       path + ".entities"));
            },
        },
        variation.node());
    return issues;
}

void validate(const Ontology &ontology, const Variation &variation, ValueKind domain) {
    auto issues = check_variation(ontology, variation, domain);
    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

namespace {

class IntervalLexer {
public:
    explicit IntervalLexer(const std::string &text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    char take() {
        char c = peek();
        if (c == '\0')
            fail("unexpected end of input");
        ++pos_;
        return c;
    }
    void expect(char c) {
        if (take() != c)
            fail(std::string("expected '") + c + "'");
    }
    // "∪" (UTF-8) or "u" or "U" separate members.
    bool separator() {
        skip_space();
        if (text_.compare(pos_, 3, "\xE2\x88\xAA") == 0) {
            pos_ += 3;
            return true;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'u' || text_[pos_] == 'U' || text_[pos_] == ',')) {
            ++pos_;
            return true;
        }
        return false;
    }
    double number() {
        skip_space();
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(text_.substr(pos_), &used);
        } catch (const std::exception &) {
            fail("expected a number");
        }
        pos_ += used;
        return x;
    }
    [[noreturn]] void fail(const std::string &message) const {
        throw ParseError(message + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
    }

private:
    const std::string &text_;
    std::size_t pos_ = 0;
};

std::string format_number(double x) {
    std::ostringstream out;
    out.precision(15);
    out << x;
    return out.str();
}

}  // namespace

Variation parse_interval_set(const std::string &text) {
    IntervalLexer lex(text);
    std::vector<Variation> members;
    while (!lex.done()) {
        if (!members.empty() && !lex.separator())
            lex.fail("expected 'u' between intervals");
        char open = lex.take();
        if (open != '[' && open != '(')
            lex.fail("expected '[' or '('");
        double lower = lex.number();
        lex.expect(',');
        double upper = lex.number();
        char close = lex.take();
        if (close != ']' && close != ')')
            lex.fail("expected ']' or ')'");
        members.push_back(Variation::interval(lower, open == '[', upper, close == ']'));
    }
    if (members.empty())
        lex.fail("no interval given");
    if (members.size() == 1)
        return members.front();
    return Variation::any_of(std::move(members));
}

std::string format_interval_set(const Variation &variation) {
    auto one = [](const IntervalVariation &i) {
        return std::string(i.lower_closed ? "[" : "(") + format_number(i.lower) + ", " +
               format_number(i.upper) + (i.upper_closed ? "]" : ")");
    };
    if (auto i = variation.get_if<IntervalVariation>())
        return one(*i);
    std::string out;
    if (auto u = variation.get_if<UnionVariation>()) {
        for (const auto &m : u->members) {
            if (!out.empty())
                out += " u ";
            out += format_interval_set(m);
        }
        return out;
    }
    if (variation.is<EmptyVariation>())
        return "{}";
    if (variation.is<WholeVariation>())
        return "(-inf, inf)";
    Variation normalized = IntervalSet::from_variation(variation).to_variation();
    if (normalized.is<IntersectionVariation>())
        throw DomainMismatchError("cannot format variation");
    return format_interval_set(normalized);
}

}  // namespace goalvar
