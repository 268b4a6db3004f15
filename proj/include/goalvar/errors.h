#ifndef GOALVAR_ERRORS_H
#define GOALVAR_ERRORS_H

#include <stdexcept>
#include <string>
#include <vector>

namespace goalvar {

// Base of every error raised by the library. `code` is a stable machine
// readable identifier (it is what the service puts on the wire), `path`
// locates the offending datum inside a document when that makes sense.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string &message, std::string path = {})
        : std::runtime_error(message), code_(std::move(code)), path_(std::move(path)) {}

    const std::string &code() const { return code_; }
    const std::string &path() const { return path_; }

private:
    std::string code_;
    std::string path_;
};

#define GOALVAR_DEFINE_ERROR(Name, Code)                                   \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string &message, std::string path = {})   \
            : Error(Code, message, std::move(path)) {}                     \
    }

GOALVAR_DEFINE_ERROR(CycleError, "cycle");
GOALVAR_DEFINE_ERROR(DuplicateConceptError, "duplicate_concept");
GOALVAR_DEFINE_ERROR(DuplicatePropertyError, "duplicate_property");
GOALVAR_DEFINE_ERROR(UnknownParentError, "unknown_parent");
GOALVAR_DEFINE_ERROR(UnknownConceptError, "unknown_concept");
GOALVAR_DEFINE_ERROR(UnknownInstanceError, "unknown_instance");
GOALVAR_DEFINE_ERROR(UnknownPropertyError, "unknown_property");
GOALVAR_DEFINE_ERROR(DomainMismatchError, "domain_mismatch");
GOALVAR_DEFINE_ERROR(InvariantViolationError, "invariant_violation");
GOALVAR_DEFINE_ERROR(EmptyVariationError, "empty_variation");
GOALVAR_DEFINE_ERROR(PreconditionViolatedError, "precondition_violated");
GOALVAR_DEFINE_ERROR(NoChangesDetectedError, "no_changes_detected");
GOALVAR_DEFINE_ERROR(InvalidAnswerError, "invalid_answer");
GOALVAR_DEFINE_ERROR(ParseError, "parse_error");
GOALVAR_DEFINE_ERROR(UnknownSkillError, "unknown_skill");

#undef GOALVAR_DEFINE_ERROR

struct Issue {
    std::string path;
    std::string message;
};

// Aggregates every structural problem found while validating a document.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Issue> issues)
        : Error("validation_error", summarize(issues),
                issues.empty() ? std::string() : issues.front().path),
          issues_(std::move(issues)) {}

    const std::vector<Issue> &issues() const { return issues_; }

private:
    static std::string summarize(const std::vector<Issue> &issues) {
        if (issues.empty())
            return "validation failed";
        std::string text = issues.front().path + ": " + issues.front().message;
        if (issues.size() > 1)
            text += " (and " + std::to_string(issues.size() - 1) + " more)";
        return text;
    }

    std::vector<Issue> issues_;
};

}  // namespace goalvar

#endif
