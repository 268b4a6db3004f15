#include "goalvar/expression.h"

#include "goalvar/errors.h"
#include "goalvar/kb.h"

#include <cctype>
#include <cmath>

namespace goalvar {

namespace {

class Parser {
public:
    explicit Parser(const std::string &text) : text_(text) {}

    ExprPtr expression() {
        ExprPtr left = term();
        for (;;) {
            if (accept("+"))
                left = binary(Expr::Kind::Add, left, term());
            else if (peek_minus())
                left = binary(Expr::Kind::Sub, left, (advance(1), term()));
            else
                return left;
        }
    }

    Condition condition() {
        Condition c;
        c.text = text_;
        c.lhs = expression();
        if (accept("=="))
            c.op = CompareOp::Equal;
        else if (accept("!="))
            c.op = CompareOp::NotEqual;
        else if (accept("<="))
            c.op = CompareOp::LessEqual;
        else if (accept(">="))
            c.op = CompareOp::GreaterEqual;
        else if (accept("<"))
            c.op = CompareOp::Less;
        else if (accept(">"))
            c.op = CompareOp::Greater;
        else
            fail("expected a comparison operator");
        c.rhs = expression();
        finish();
        return c;
    }

    Effect effect() {
        Effect e;
        e.text = text_;
        e.param = identifier();
        if (!accept("."))
            fail("expected '.' after parameter");
        e.property = identifier();
        if (accept("+="))
            e.op = EffectOp::Add;
        else if (accept("-="))
            e.op = EffectOp::Subtract;
        else if (accept("="))
            e.op = EffectOp::Assign;
        else
            fail("expected '=', '+=' or '-='");
        e.value = expression();
        finish();
        return e;
    }

    void finish() {
        skip();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
    }

private:
    static ExprPtr binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr term() {
        ExprPtr left = unary();
        for (;;) {
            if (accept("*"))
                left = binary(Expr::Kind::Mul, left, unary());
            else if (accept("/"))
                left = binary(Expr::Kind::Div, left, unary());
            else
                return left;
        }
    }

    ExprPtr unary() {
        if (peek_minus()) {
            advance(1);
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Neg;
            e->lhs = unary();
            return e;
        }
        return primary();
    }

    ExprPtr primary() {
        skip();
        if (accept("(")) {
            ExprPtr inner = expression();
            if (!accept(")"))
                fail("expected ')'");
            return inner;
        }
        auto e = std::make_shared<Expr>();
        char c = pos_ < text_.size() ? text_[pos_] : '\0';
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            e->kind = Expr::Kind::Number;
            e->number = std::stod(text_.substr(pos_), &used);
            advance(used);
            return e;
        }
        std::string name = identifier();
        if (name == "true" || name == "false") {
            e->kind = Expr::Kind::Boolean;
            e->boolean = name == "true";
            return e;
        }
        if ((name == "delta" || name == "before") && accept("(")) {
            e->kind = name == "delta" ? Expr::Kind::Delta : Expr::Kind::Before;
            e->param = identifier();
            if (!accept("."))
                fail("expected '.' inside " + name + "()");
            e->property = identifier();
            if (!accept(")"))
                fail("expected ')'");
            return e;
        }
        e->param = name;
        if (accept(".")) {
            e->kind = Expr::Kind::Property;
            e->property = identifier();
        } else {
            e->kind = Expr::Kind::Param;
        }
        return e;
    }

    std::string identifier() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start])))
            fail("expected an identifier");
        return text_.substr(start, pos_ - start);
    }

    // '-' that is not the start of '-='.
    bool peek_minus() {
        skip();
        return pos_ < text_.size() && text_[pos_] == '-' &&
               (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '=');
    }

    bool accept(std::string_view token) {
        skip();
        if (text_.compare(pos_, token.size(), token) != 0)
            return false;
        // Keep "<" from swallowing the first half of "<=" and "=" of "==".
        if ((token == "<" || token == ">" || token == "=") && pos_ + 1 < text_.size() &&
            text_[pos_ + 1] == '=')
            return false;
        pos_ += token.size();
        return true;
    }

    void advance(std::size_t n) { pos_ += n; }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string &message) const {
        throw ParseError(message + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
    }

    const std::string &text_;
    std::size_t pos_ = 0;
};

const Value &binding(const EvalContext &ctx, const std::string &param) {
    auto it = ctx.bindings->find(param);
    if (it == ctx.bindings->end())
        throw UnknownPropertyError("unbound parameter '" + param + "'", param);
    return it->second;
}

Value read_property(const EnvironmentState *env, const EvalContext &ctx, const Expr &e) {
    if (!env)
        throw Error("no_snapshot", "expression '" + e.param + "." + e.property +
                                       "' needs an environment");
    const Value &ref = binding(ctx, e.param);
    return get_value(*env, ref.as_instance_ref(), e.property);
}

double number_of(const Value &v) {
    if (!is_numeric(v.kind()))
        throw DomainMismatchError("arithmetic on a " + std::string(to_string(v.kind())) + " value");
    return v.as_number();
}

}  // namespace

std::string_view predicate_name(CompareOp op) {
    switch (op) {
    case CompareOp::Equal:
        return "Equal";
    case CompareOp::NotEqual:
        return "NotEqual";
    case CompareOp::Less:
        return "Less";
    case CompareOp::LessEqual:
        return "LessEqual";
    case CompareOp::Greater:
        return "Greater";
    case CompareOp::GreaterEqual:
        return "GreaterEqual";
    }
    return "";
}

ExprPtr parse_expression(const std::string &text) {
    Parser p(text);
    ExprPtr e = p.expression();
    p.finish();
    return e;
}

Condition parse_condition(const std::string &text) {
    return Parser(text).condition();
}

Effect parse_effect(const std::string &text) {
    return Parser(text).effect();
}

Value evaluate(const Expr &e, const EvalContext &ctx) {
    switch (e.kind) {
    case Expr::Kind::Number:
        return Value::number(e.number);
    case Expr::Kind::Boolean:
        return Value::boolean(e.boolean);
    case Expr::Kind::Param:
        return binding(ctx, e.param);
    case Expr::Kind::Property:
        return read_property(ctx.env, ctx, e);
    case Expr::Kind::Before:
        return read_property(ctx.before, ctx, e);
    case Expr::Kind::Delta:
        return Value::number(number_of(read_property(ctx.env, ctx, e)) -
                             number_of(read_property(ctx.before, ctx, e)));
    case Expr::Kind::Neg:
        return Value::number(-number_of(evaluate(*e.lhs, ctx)));
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
        double a = number_of(evaluate(*e.lhs, ctx));
        double b = number_of(evaluate(*e.rhs, ctx));
        switch (e.kind) {
        case Expr::Kind::Add:
            return Value::number(a + b);
        case Expr::Kind::Sub:
            return Value::number(a - b);
        case Expr::Kind::Mul:
            return Value::number(a * b);
        default:
            return Value::number(a / b);
        }
    }
    }
    return Value();
}

ConditionResult evaluate(const Condition &c, const EvalContext &ctx, double tolerance) {
    ConditionResult r{false, evaluate(*c.lhs, ctx), evaluate(*c.rhs, ctx)};
    bool numeric = is_numeric(r.lhs.kind()) && is_numeric(r.rhs.kind());
    if (c.op == CompareOp::Equal || c.op == CompareOp::NotEqual) {
        bool equal = numeric ? std::fabs(r.lhs.as_number() - r.rhs.as_number()) <= tolerance
                             : values_equal(r.lhs, r.rhs);
        r.holds = (c.op == CompareOp::Equal) == equal;
        return r;
    }
    if (!numeric)
        throw DomainMismatchError("ordering comparison on non-numeric values in '" + c.text + "'");
    double a = r.lhs.as_number();
    double b = r.rhs.as_number();
    switch (c.op) {
    case CompareOp::Less:
        r.holds = a < b - tolerance;
        break;
    case CompareOp::LessEqual:
        r.holds = a <= b + tolerance;
        break;
    case CompareOp::Greater:
        r.holds = a > b + tolerance;
        break;
    case CompareOp::GreaterEqual:
        r.holds = a >= b - tolerance;
        break;
    default:
        break;
    }
    return r;
}

void collect_params(const Expr &e, std::set<std::string> &out) {
    if (!e.param.empty())
        out.insert(e.param);
    if (e.lhs)
        collect_params(*e.lhs, out);
    if (e.rhs)
        collect_params(*e.rhs, out);
}

void collect_snapshot_reads(const Expr &e, std::set<std::pair<std::string, std::string>> &out) {
    if (e.kind == Expr::Kind::Delta || e.kind == Expr::Kind::Before)
        out.emplace(e.param, e.property);
    if (e.lhs)
        collect_snapshot_reads(*e.lhs, out);
    if (e.rhs)
        collect_snapshot_reads(*e.rhs, out);
}

}  // namespace goalvar
