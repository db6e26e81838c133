#ifndef SETBRANCH_EXPR_HPP
#define SETBRANCH_EXPR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "setbranch/errors.hpp"

namespace setbranch {

using Value = std::int64_t;

enum class Op : std::uint8_t {
    Const,
    Var,
    // unary
    Neg,
    Abs,
    // binary
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Dist,
};

inline constexpr std::array<std::pair<Op, std::string_view>, 18> kOperatorNames{{
    {Op::Neg, "neg"}, {Op::Abs, "abs"}, {Op::Add, "add"}, {Op::Sub, "sub"},
    {Op::Mul, "mul"}, {Op::Div, "div"}, {Op::Mod, "mod"}, {Op::Min, "min"},
    {Op::Max, "max"}, {Op::Eq, "eq"},   {Op::Ne, "ne"},   {Op::Lt, "lt"},
    {Op::Le, "le"},   {Op::Gt, "gt"},   {Op::Ge, "ge"},   {Op::And, "and"},
    {Op::Or, "or"},   {Op::Dist, "dist"},
}};

inline std::optional<Op> operator_from_name(std::string_view name) {
    for (const auto& [op, text] : kOperatorNames)
        if (text == name) return op;
    return std::nullopt;
}

inline std::string_view operator_name(Op op) {
    for (const auto& [o, text] : kOperatorNames)
        if (o == op) return text;
    return {};
}

inline constexpr std::size_t arity(Op op) {
    switch (op) {
        case Op::Const:
        case Op::Var: return 0;
        case Op::Neg:
        case Op::Abs: return 1;
        default: return 2;
    }
}

// Expression tree node. Variable references carry the name as written and,
// once bound to a constraint scope, the scope position they read from.
struct Expr {
    Op op = Op::Const;
    Value constant = 0;
    std::string name;
    std::size_t slot = 0;
    std::vector<Expr> args;

    static Expr number(Value v) { return Expr{Op::Const, v, {}, 0, {}}; }
    static Expr var(std::string n) { return Expr{Op::Var, 0, std::move(n), 0, {}}; }
    static Expr unary(Op op, Expr a) {
        Expr e{op, 0, {}, 0, {}};
        e.args.push_back(std::move(a));
        return e;
    }
    static Expr binary(Op op, Expr a, Expr b) {
        Expr e{op, 0, {}, 0, {}};
        e.args.push_back(std::move(a));
        e.args.push_back(std::move(b));
        return e;
    }

    // Structural equality (ignores slots, which are derived from the scope).
    friend bool operator==(const Expr& a, const Expr& b) {
        return a.op == b.op && a.constant == b.constant && a.name == b.name && a.args == b.args;
    }
};

// Collects variable names in first-occurrence order.
inline void collect_names(const Expr& e, std::vector<std::string>& out) {
    if (e.op == Op::Var) {
        for (const auto& n : out)
            if (n == e.name) return;
        out.push_back(e.name);
        return;
    }
    for (const auto& a : e.args) collect_names(a, out);
}

// Resolves every variable reference to its position in `scope`.
// Returns the first name that is not in scope, if any.
inline std::optional<std::string> bind_slots(Expr& e, std::span<const std::string> scope) {
    if (e.op == Op::Var) {
        for (std::size_t i = 0; i < scope.size(); ++i) {
            if (scope[i] == e.name) {
                e.slot = i;
                return std::nullopt;
            }
        }
        return e.name;
    }
    for (auto& a : e.args)
        if (auto missing = bind_slots(a, scope)) return missing;
    return std::nullopt;
}

// Evaluates with bindings indexed by scope slot. 64-bit signed arithmetic;
// overflow and division/modulo by zero raise EvalError. Division truncates
// toward zero and the remainder takes the sign of the dividend.
inline Value eval(const Expr& e, std::span<const Value> bindings) {
    switch (e.op) {
        case Op::Const: return e.constant;
        case Op::Var: return bindings[e.slot];
        case Op::Neg: {
            const Value a = eval(e.args[0], bindings);
            if (a == std::numeric_limits<Value>::min()) throw EvalError("integer overflow");
            return -a;
        }
        case Op::Abs: {
            const Value a = eval(e.args[0], bindings);
            if (a == std::numeric_limits<Value>::min()) throw EvalError("integer overflow");
            return a < 0 ? -a : a;
        }
        default: break;
    }

    const Value a = eval(e.args[0], bindings);
    // and/or short-circuit on the left operand
    if (e.op == Op::And && a == 0) return 0;
    if (e.op == Op::Or && a != 0) return 1;
    const Value b = eval(e.args[1], bindings);
    Value r = 0;
    switch (e.op) {
        case Op::Add:
            if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow");
            return r;
        case Op::Sub:
            if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow");
            return r;
        case Op::Mul:
            if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow");
            return r;
        case Op::Div:
            if (b == 0) throw EvalError("division by zero");
            if (a == std::numeric_limits<Value>::min() && b == -1) throw EvalError("integer overflow");
            return a / b;
        case Op::Mod:
            if (b == 0) throw EvalError("modulo by zero");
            if (b == -1) return 0;
            return a % b;
        case Op::Min: return a < b ? a : b;
        case Op::Max: return a < b ? b : a;
        case Op::Eq: return a == b;
        case Op::Ne: return a != b;
        case Op::Lt: return a < b;
        case Op::Le: return a <= b;
        case Op::Gt: return a > b;
        case Op::Ge: return a >= b;
        case Op::And: return b != 0;
        case Op::Or: return b != 0;
        case Op::Dist: {
            if (__builtin_sub_overflow(a, b, &r) || r == std::numeric_limits<Value>::min()) throw EvalError("integer overflow");
            return r < 0 ? -r : r;
        }
        default: break;
    }
    throw EvalError("malformed expression");
}

// Canonical prefix form, e.g. "le(add(x,3),y)".
inline void write_expr(const Expr& e, std::string& out) {
    switch (e.op) {
        case Op::Const: out += std::to_string(e.constant); return;
        case Op::Var: out += e.name; return;
        default: break;
    }
    out += operator_name(e.op);
    out += '(';
    for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ',';
        write_expr(e.args[i], out);
    }
    out += ')';
}

inline std::string to_string(const Expr& e) {
    std::string s;
    write_expr(e, s);
    return s;
}

}  // namespace setbranch

#endif
