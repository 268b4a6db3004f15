#ifndef GOALVAR_EXPRESSION_H
#define GOALVAR_EXPRESSION_H

#include "goalvar/value.h"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

// Small expression language used by skill templates:
//
//   condition := expr ('==' | '!=' | '<' | '<=' | '>' | '>=') expr
//   effect    := param '.' property ('=' | '+=' | '-=') expr
//   expr      := term (('+' | '-') term)*
//   term      := unary (('*' | '/') unary)*
//   unary     := '-' unary | primary
//   primary   := number | 'true' | 'false' | param | param '.' property
//              | 'delta' '(' param '.' property ')'
//              | 'before' '(' param '.' property ')' | '(' expr ')'
//
// `delta` and `before` read the previous snapshot and are only meaningful in
// recognition checks.

namespace goalvar {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Boolean, Param, Property, Delta, Before, Neg, Add, Sub, Mul, Div };

    Kind kind = Kind::Number;
    double number = 0.0;
    bool boolean = false;
    std::string param;
    std::string property;
    ExprPtr lhs;
    ExprPtr rhs;
};

enum class CompareOp { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

std::string_view predicate_name(CompareOp op);

struct Condition {
    std::string text;
    ExprPtr lhs;
    CompareOp op = CompareOp::Equal;
    ExprPtr rhs;
};

enum class EffectOp { Assign, Add, Subtract };

struct Effect {
    std::string text;
    std::string param;
    std::string property;
    EffectOp op = EffectOp::Assign;
    ExprPtr value;
};

ExprPtr parse_expression(const std::string &text);
Condition parse_condition(const std::string &text);
Effect parse_effect(const std::string &text);

struct EvalContext {
    const std::map<std::string, Value> *bindings = nullptr;
    const EnvironmentState *env = nullptr;
    // Previous snapshot, for delta() and before().
    const EnvironmentState *before = nullptr;
};

Value evaluate(const Expr &expr, const EvalContext &context);

struct ConditionResult {
    bool holds = false;
    Value lhs;
    Value rhs;
};

// Numeric comparisons allow `tolerance`: `a > b` means a > b + tolerance,
// `a >= b` means a >= b - tolerance, `a == b` means |a - b| <= tolerance.
ConditionResult evaluate(const Condition &condition, const EvalContext &context, double tolerance);

// Parameters referenced anywhere in the expression.
void collect_params(const Expr &expr, std::set<std::string> &out);
// (param, property) pairs read through delta() or before().
void collect_snapshot_reads(const Expr &expr, std::set<std::pair<std::string, std::string>> &out);

}  // namespace goalvar

#endif
