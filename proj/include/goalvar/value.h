#ifndef GOALVAR_VALUE_H
#define GOALVAR_VALUE_H

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace goalvar {

// Numeric equality tolerance used throughout the library.
inline constexpr double kEpsilon = 1e-9;

enum class ValueKind {
    Number,
    Integer,
    Boolean,
    ConceptRef,
    InstanceRef,
    Pose,
    Location,
    Collection,
    Instance,
    Environment,
};

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> value_kind_from_string(std::string_view name);
bool is_numeric(ValueKind kind);

struct Pose {
    std::array<double, 3> position{0.0, 0.0, 0.0};     // meters
    std::array<double, 4> orientation{1.0, 0.0, 0.0, 0.0};  // w, x, y, z

    double quaternion_norm() const;
};

// Euclidean distance between positions and the rotation angle (radians)
// separating two orientations.
double position_distance(const Pose &a, const Pose &b);
double rotation_angle(const Pose &a, const Pose &b);

struct Location {
    std::string reference;
    Pose delta;
};

struct ConceptRef {
    std::string id;
};

struct InstanceRef {
    std::string id;
};

struct Collection;
struct Instance;
class EnvironmentState;

// Immutable tagged union over every value domain. Recursive kinds are held
// through shared immutable storage, so copies are cheap and never alias
// mutable state.
class Value {
public:
    Value() : data_(0.0) {}

    static Value number(double x) { return Value(Storage(std::in_place_type<double>, x)); }
    static Value integer(std::int64_t x) { return Value(Storage(std::in_place_type<std::int64_t>, x)); }
    static Value boolean(bool x) { return Value(Storage(std::in_place_type<bool>, x)); }
    static Value concept_ref(std::string id) { return Value(Storage(ConceptRef{std::move(id)})); }
    static Value instance_ref(std::string id) { return Value(Storage(InstanceRef{std::move(id)})); }
    static Value pose(Pose p) { return Value(Storage(p)); }
    static Value location(Location l) { return Value(Storage(std::move(l))); }
    static Value collection(Collection c);
    static Value instance(Instance i);
    static Value environment(EnvironmentState e);

    ValueKind kind() const;

    // Number or Integer, widened to double.
    double as_number() const;
    std::int64_t as_integer() const;
    bool as_boolean() const;
    const std::string &as_concept() const;
    const std::string &as_instance_ref() const;
    const Pose &as_pose() const;
    const Location &as_location() const;
    const Collection &as_collection() const;
    const Instance &as_instance() const;
    const EnvironmentState &as_environment() const;

private:
    using Storage = std::variant<double, std::int64_t, bool, ConceptRef, InstanceRef, Pose, Location,
                                 std::shared_ptr<const Collection>, std::shared_ptr<const Instance>,
                                 std::shared_ptr<const EnvironmentState>>;

    explicit Value(Storage data) : data_(std::move(data)) {}

    Storage data_;
};

struct Collection {
    std::map<std::string, Value> elements;
};

struct Instance {
    std::string id;
    std::string concept_id;
    std::map<std::string, Value> values;
};

// The state of an environment: every entity instance, keyed by id.
class EnvironmentState {
public:
    EnvironmentState() = default;
    explicit EnvironmentState(std::map<std::string, Instance> instances)
        : instances_(std::move(instances)) {}

    const std::map<std::string, Instance> &instances() const { return instances_; }
    const Instance *find(const std::string &id) const;
    bool contains(const std::string &id) const { return instances_.count(id) > 0; }
    std::size_t size() const { return instances_.size(); }

    // Returns a copy with `instance` inserted or replaced.
    EnvironmentState with(Instance instance) const;

private:
    std::map<std::string, Instance> instances_;
};

// Full-value equality; numbers compare within `eps`.
bool values_equal(const Value &a, const Value &b, double eps = kEpsilon);
bool poses_equal(const Pose &a, const Pose &b, double eps = kEpsilon);
bool instances_equal(const Instance &a, const Instance &b, double eps = kEpsilon);
bool environments_equal(const EnvironmentState &a, const EnvironmentState &b,
                        double eps = kEpsilon);

// Short human readable rendering, used in labels and CLI summaries.
std::string describe(const Value &value);

}  // namespace goalvar

#endif
