#include "goalvar/value.h"

#include "goalvar/errors.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace goalvar {

namespace {
constexpr std::array<std::string_view, 10> kKindNames = {
    "Number", "Integer", "Boolean", "ConceptRef", "InstanceRef",
    "Pose", "Location", "Collection", "Instance", "Environment"};

[[noreturn]] void wrong_kind(ValueKind expected, ValueKind actual) {
    throw DomainMismatchError("expected a " + std::string(to_string(expected)) + " value, got " +
                              std::string(to_string(actual)));
}
}  // namespace

std::string_view to_string(ValueKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ValueKind> value_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name)
            return static_cast<ValueKind>(i);
    return std::nullopt;
}

bool is_numeric(ValueKind kind) {
    return kind == ValueKind::Number || kind == ValueKind::Integer;
}

double Pose::quaternion_norm() const {
    double sum = 0.0;
    for (double q : orientation)
        sum += q * q;
    return std::sqrt(sum);
}

double position_distance(const Pose &a, const Pose &b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double d = a.position[i] - b.position[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double rotation_angle(const Pose &a, const Pose &b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        dot += a.orientation[i] * b.orientation[i];
    dot = std::min(1.0, std::fabs(dot));
    return 2.0 * std::acos(dot);
}

Value Value::collection(Collection c) {
    return Value(Storage(std::make_shared<const Collection>(std::move(c))));
}

Value Value::instance(Instance i) {
    return Value(Storage(std::make_shared<const Instance>(std::move(i))));
}

Value Value::environment(EnvironmentState e) {
    return Value(Storage(std::make_shared<const EnvironmentState>(std::move(e))));
}

ValueKind Value::kind() const {
    return static_cast<ValueKind>(data_.index());
}

double Value::as_number() const {
    if (auto d = std::get_if<double>(&data_))
        return *d;
    if (auto i = std::get_if<std::int64_t>(&data_))
        return static_cast<double>(*i);
    wrong_kind(ValueKind::Number, kind());
}

std::int64_t Value::as_integer() const {
    if (auto i = std::get_if<std::int64_t>(&data_))
        return *i;
    wrong_kind(ValueKind::Integer, kind());
}

bool Value::as_boolean() const {
    if (auto b = std::get_if<bool>(&data_))
        return *b;
    wrong_kind(ValueKind::Boolean, kind());
}

const std::string &Value::as_concept() const {
    if (auto c = std::get_if<ConceptRef>(&data_))
        return c->id;
    wrong_kind(ValueKind::ConceptRef, kind());
}

const std::string &Value::as_instance_ref() const {
    if (auto r = std::get_if<InstanceRef>(&data_))
        return r->id;
    wrong_kind(ValueKind::InstanceRef, kind());
}

const Pose &Value::as_pose() const {
    if (auto p = std::get_if<Pose>(&data_))
        return *p;
    wrong_kind(ValueKind::Pose, kind());
}

const Location &Value::as_location() const {
    if (auto l = std::get_if<Location>(&data_))
        return *l;
    wrong_kind(ValueKind::Location, kind());
}

const Collection &Value::as_collection() const {
    if (auto c = std::get_if<std::shared_ptr<const Collection>>(&data_))
        return **c;
    wrong_kind(ValueKind::Collection, kind());
}

const Instance &Value::as_instance() const {
    if (auto i = std::get_if<std::shared_ptr<const Instance>>(&data_))
        return **i;
    wrong_kind(ValueKind::Instance, kind());
}

const EnvironmentState &Value::as_environment() const {
    if (auto e = std::get_if<std::shared_ptr<const EnvironmentState>>(&data_))
        return **e;
    wrong_kind(ValueKind::Environment, kind());
}

const Instance *EnvironmentState::find(const std::string &id) const {
    auto it = instances_.find(id);
    return it == instances_.end() ? nullptr : &it->second;
}

EnvironmentState EnvironmentState::with(Instance instance) const {
    auto copy = instances_;
    std::string id = instance.id;
    copy.insert_or_assign(std::move(id), std::move(instance));
    return EnvironmentState(std::move(copy));
}

bool poses_equal(const Pose &a, const Pose &b, double eps) {
    for (std::size_t i = 0; i < 3; ++i)
        if (std::fabs(a.position[i] - b.position[i]) > eps)
            return false;
    for (std::size_t i = 0; i < 4; ++i)
        if (std::fabs(a.orientation[i] - b.orientation[i]) > eps)
            return false;
    return true;
}

bool instances_equal(const Instance &a, const Instance &b, double eps) {
    if (a.id != b.id || a.concept_id != b.concept_id || a.values.size() != b.values.size())
        return false;
    for (const auto &[name, value] : a.values) {
        auto it = b.values.find(name);
        if (it == b.values.end() || !values_equal(value, it->second, eps))
            return false;
    }
    return true;
}

bool environments_equal(const EnvironmentState &a, const EnvironmentState &b, double eps) {
    if (a.size() != b.size())
        return false;
    for (const auto &[id, instance] : a.instances()) {
        const Instance *other = b.find(id);
        if (!other || !instances_equal(instance, *other, eps))
            return false;
    }
    return true;
}

bool values_equal(const Value &a, const Value &b, double eps) {
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case ValueKind::Number:
        return a.as_number() == b.as_number() || std::fabs(a.as_number() - b.as_number()) <= eps;
    case ValueKind::Integer:
        return a.as_integer() == b.as_integer();
    case ValueKind::Boolean:
        return a.as_boolean() == b.as_boolean();
    case ValueKind::ConceptRef:
        return a.as_concept() == b.as_concept();
    case ValueKind::InstanceRef:
        return a.as_instance_ref() == b.as_instance_ref();
    case ValueKind::Pose:
        return poses_equal(a.as_pose(), b.as_pose(), eps);
    case ValueKind::Location:
        return a.as_location().reference == b.as_location().reference &&
               poses_equal(a.as_location().delta, b.as_location().delta, eps);
    case ValueKind::Collection: {
        const auto &x = a.as_collection().elements;
        const auto &y = b.as_collection().elements;
        if (x.size() != y.size())
            return false;
        for (const auto &[key, value] : x) {
            auto it = y.find(key);
            if (it == y.end() || !values_equal(value, it->second, eps))
                return false;
        }
        return true;
    }
    case ValueKind::Instance:
        return instances_equal(a.as_instance(), b.as_instance(), eps);
    case ValueKind::Environment:
        return environments_equal(a.as_environment(), b.as_environment(), eps);
    }
    return false;
}

std::string describe(const Value &value) {
    std::ostringstream out;
    switch (value.kind()) {
    case ValueKind::Number:
        out << value.as_number();
        break;
    case ValueKind::Integer:
        out << value.as_integer();
        break;
    case ValueKind::Boolean:
        out << (value.as_boolean() ? "true" : "false");
        break;
    case ValueKind::ConceptRef:
        out << value.as_concept();
        break;
    case ValueKind::InstanceRef:
        out << '@' << value.as_instance_ref();
        break;
    case ValueKind::Pose: {
        const auto &p = value.as_pose().position;
        out << "Pose(" << p[0] << ", " << p[1] << ", " << p[2] << ")";
        break;
    }
    case ValueKind::Location: {
        const auto &l = value.as_location();
        const auto &p = l.delta.position;
        out << "Location(" << l.reference << " + " << p[0] << ", " << p[1] << ", " << p[2] << ")";
        break;
    }
    case ValueKind::Collection:
        out << "Collection[" << value.as_collection().elements.size() << "]";
        break;
    case ValueKind::Instance:
        out << value.as_instance().id << ':' << value.as_instance().concept_id;
        break;
    case ValueKind::Environment:
        out << "Environment[" << value.as_environment().size() << "]";
        break;
    }
    return out.str();
}

}  // namespace goalvar
