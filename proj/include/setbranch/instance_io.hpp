#ifndef SETBRANCH_INSTANCE_IO_HPP
#define SETBRANCH_INSTANCE_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "setbranch/errors.hpp"
#include "setbranch/expr.hpp"
#include "setbranch/model.hpp"

// Plain-text instance format, one declaration per line, '#' starts a comment:
//
//   csp 1                                      optional header
//   var NAME LO..HI
//   var NAME in {v1,v2,...}
//   con ext allowed (NAME,...) : (t1,t2,...) (t1,t2,...) ...
//   con ext forbidden (NAME,...) : ...
//   con int (NAME,...) : EXPR
//
// EXPR := INT | NAME | OP1(EXPR) | OP2(EXPR,EXPR)
//   OP1 in {neg, abs}
//   OP2 in {add, sub, mul, div, mod, min, max, eq, ne, lt, le, gt, ge, and, or, dist}

namespace setbranch {

inline constexpr std::size_t kMaxDomainSize = 1'000'000;
inline constexpr std::size_t kMaxExprDepth = 512;

namespace detail {

enum class Tok { Ident, Int, LParen, RParen, LBrace, RBrace, Comma, Colon, DotDot, Newline, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    Value value = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

inline std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "name";
        case Tok::Int: return "integer";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::DotDot: return "'..'";
        case Tok::Newline: return "end of line";
        case Tok::End: return "end of input";
    }
    return "token";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    static bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
    static bool digit(char c) { return c >= '0' && c <= '9'; }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void advance() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                bump();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            current_ = t;
            return;
        }
        const std::size_t start = pos_;
        const char c = text_[pos_];
        auto single = [&](Tok k) {
            bump();
            t.kind = k;
        };
        if (c == '\n') {
            single(Tok::Newline);
        } else if (c == '(') {
            single(Tok::LParen);
        } else if (c == ')') {
            single(Tok::RParen);
        } else if (c == '{') {
            single(Tok::LBrace);
        } else if (c == '}') {
            single(Tok::RBrace);
        } else if (c == ',') {
            single(Tok::Comma);
        } else if (c == ':') {
            single(Tok::Colon);
        } else if (c == '.') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') {
                bump();
                bump();
                t.kind = Tok::DotDot;
            } else {
                throw ParseError(t.line, t.column, "unexpected '.'");
            }
        } else if (ident_start(c)) {
            while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
            t.kind = Tok::Ident;
        } else if (digit(c) || (c == '-' && pos_ + 1 < text_.size() && digit(text_[pos_ + 1]))) {
            bump();
            while (pos_ < text_.size() && digit(text_[pos_])) bump();
            t.kind = Tok::Int;
            const auto* first = text_.data() + start;
            const auto* last = text_.data() + pos_;
            const auto [ptr, ec] = std::from_chars(first, last, t.value);
            if (ec != std::errc() || ptr != last) throw ParseError(t.line, t.column, "integer out of range");
        } else {
            throw ParseError(t.line, t.column, "unexpected character");
        }
        t.text = text_.substr(start, pos_ - start);
        current_ = t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Problem parse() {
        bool seen_declaration = false;
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Tok::End) break;
            if (t.kind == Tok::Newline) {
                lex_.next();
                continue;
            }
            const Token head = expect(Tok::Ident);
            if (head.text == "csp") {
                if (seen_declaration) fail(head, "header must come before declarations");
                const Token version = expect(Tok::Int);
                if (version.value != 1) fail(version, "unsupported format version");
            } else if (head.text == "var") {
                parse_var();
            } else if (head.text == "con") {
                parse_con();
            } else {
                fail(head, "expected 'var', 'con' or 'csp'");
            }
            seen_declaration = true;
            end_of_line();
        }
        try {
            return Problem(std::move(vars_), std::move(cons_));
        } catch (const ModelError& e) {
            throw ParseError(lex_.peek().line, lex_.peek().column, e.what());
        }
    }

    Expr parse_standalone_expr() {
        Expr e = parse_expr(0);
        while (lex_.peek().kind == Tok::Newline) lex_.next();
        if (lex_.peek().kind != Tok::End) fail(lex_.peek(), "trailing input after expression");
        return e;
    }

private:
    [[noreturn]] static void fail(const Token& t, const std::string& what) { throw ParseError(t.line, t.column, what); }

    Token expect(Tok kind) {
        const Token& t = lex_.peek();
        if (t.kind != kind) fail(t, "expected " + std::string(describe(kind)) + ", found " + std::string(describe(t.kind)));
        return lex_.next();
    }

    void end_of_line() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::End) return;
        expect(Tok::Newline);
    }

    void parse_var() {
        const Token name = expect(Tok::Ident);
        if (index_.count(std::string(name.text))) fail(name, "duplicate variable '" + std::string(name.text) + "'");
        Variable v;
        v.name = std::string(name.text);
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "in") {
            lex_.next();
            expect(Tok::LBrace);
            std::unordered_set<Value> seen;
            for (;;) {
                const Token value = expect(Tok::Int);
                if (!seen.insert(value.value).second) fail(value, "duplicate domain value");
                if (v.domain.size() >= kMaxDomainSize) fail(value, "domain too large");
                v.domain.push_back(value.value);
                if (lex_.peek().kind == Tok::Comma) {
                    lex_.next();
                    continue;
                }
                expect(Tok::RBrace);
                break;
            }
        } else {
            const Token lo = expect(Tok::Int);
            expect(Tok::DotDot);
            const Token hi = expect(Tok::Int);
            if (lo.value > hi.value) fail(lo, "empty range");
            const auto width = static_cast<std::uint64_t>(hi.value) - static_cast<std::uint64_t>(lo.value);
            if (width >= kMaxDomainSize) fail(lo, "domain too large");
            for (Value x = lo.value;; ++x) {
                v.domain.push_back(x);
                if (x == hi.value) break;
            }
        }
        std::sort(v.domain.begin(), v.domain.end());
        index_.emplace(v.name, static_cast<VarId>(vars_.size()));
        vars_.push_back(std::move(v));
    }

    static bool in_domain(const std::vector<Value>& dom, Value v) {
        return std::binary_search(dom.begin(), dom.end(), v);
    }

    std::vector<VarId> parse_scope(std::vector<std::string>& names) {
        expect(Tok::LParen);
        std::vector<VarId> scope;
        for (;;) {
            const Token t = expect(Tok::Ident);
            const auto it = index_.find(std::string(t.text));
            if (it == index_.end()) fail(t, "undeclared variable '" + std::string(t.text) + "'");
            for (VarId seen : scope)
                if (seen == it->second) fail(t, "variable repeated in scope");
            scope.push_back(it->second);
            names.emplace_back(t.text);
            if (lex_.peek().kind == Tok::Comma) {
                lex_.next();
                continue;
            }
            expect(Tok::RParen);
            return scope;
        }
    }

    void parse_con() {
        const Token kind = expect(Tok::Ident);
        Constraint c;
        std::vector<std::string> names;
        if (kind.text == "ext") {
            const Token polarity = expect(Tok::Ident);
            if (polarity.text != "allowed" && polarity.text != "forbidden")
                fail(polarity, "expected 'allowed' or 'forbidden'");
            c.scope = parse_scope(names);
            expect(Tok::Colon);
            Extensional ext;
            ext.allowed = polarity.text == "allowed";
            while (lex_.peek().kind == Tok::LParen) {
                const Token open = lex_.next();
                Tuple tuple;
                for (;;) {
                    const Token value = expect(Tok::Int);
                    if (tuple.size() >= c.scope.size()) fail(value, "tuple arity does not match scope");
                    const auto& dom = vars_[c.scope[tuple.size()]].domain;
                    if (!in_domain(dom, value.value))
                        fail(value, "value " + std::to_string(value.value) + " outside the domain of '" +
                                        names[tuple.size()] + "'");
                    tuple.push_back(value.value);
                    if (lex_.peek().kind == Tok::Comma) {
                        lex_.next();
                        continue;
                    }
                    expect(Tok::RParen);
                    break;
                }
                if (tuple.size() != c.scope.size()) fail(open, "tuple arity does not match scope");
                ext.tuples.push_back(std::move(tuple));
            }
            c.relation = std::move(ext);
        } else if (kind.text == "int") {
            c.scope = parse_scope(names);
            expect(Tok::Colon);
            const Token at = lex_.peek();
            Expr e = parse_expr(0);
            if (auto missing = bind_slots(e, names)) fail(at, "variable '" + *missing + "' is not in the constraint scope");
            c.relation = Intensional{std::move(e)};
        } else {
            fail(kind, "expected 'ext' or 'int'");
        }
        cons_.push_back(std::move(c));
    }

    Expr parse_expr(std::size_t depth) {
        const Token t = lex_.next();
        if (depth > kMaxExprDepth) fail(t, "expression nested too deeply");
        if (t.kind == Tok::Int) return Expr::number(t.value);
        if (t.kind != Tok::Ident) fail(t, "expected expression, found " + std::string(describe(t.kind)));
        if (lex_.peek().kind != Tok::LParen) return Expr::var(std::string(t.text));
        const auto op = operator_from_name(t.text);
        if (!op) fail(t, "unknown operator '" + std::string(t.text) + "'");
        lex_.next();
        Expr e;
        e.op = *op;
        e.args.push_back(parse_expr(depth + 1));
        if (arity(*op) == 2) {
            expect(Tok::Comma);
            e.args.push_back(parse_expr(depth + 1));
        }
        expect(Tok::RParen);
        return e;
    }

    Lexer lex_;
    std::vector<Variable> vars_;
    std::vector<Constraint> cons_;
    std::unordered_map<std::string, VarId> index_;
};

}  // namespace detail

inline Problem parse_instance(std::string_view text) {
    detail::Parser parser(text);
    return parser.parse();
}

// Parses a lone expression such as "le(add(x,3),y)". Variables are left
// unbound; use bind_slots before evaluating.
inline Expr parse_expression(std::string_view text) {
    detail::Parser parser(text);
    return parser.parse_standalone_expr();
}

inline Problem read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

inline std::string serialize_instance(const Problem& p) {
    std::string out;
    for (const auto& v : p.variables()) {
        out += "var " + v.name + " ";
        const bool contiguous =
            static_cast<std::uint64_t>(v.domain.back()) - static_cast<std::uint64_t>(v.domain.front()) + 1 ==
            v.domain.size();
        if (contiguous) {
            out += std::to_string(v.domain.front()) + ".." + std::to_string(v.domain.back());
        } else {
            out += "in {";
            for (std::size_t i = 0; i < v.domain.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(v.domain[i]);
            }
            out += '}';
        }
        out += '\n';
    }
    for (const auto& c : p.constraints()) {
        std::string scope = "(";
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            if (i) scope += ',';
            scope += p.name(c.scope[i]);
        }
        scope += ')';
        if (const auto* ext = std::get_if<Extensional>(&c.relation)) {
            out += ext->allowed ? "con ext allowed " : "con ext forbidden ";
            out += scope + " :";
            for (const auto& t : ext->tuples) {
                out += " (";
                for (std::size_t i = 0; i < t.size(); ++i) {
                    if (i) out += ',';
                    out += std::to_string(t[i]);
                }
                out += ')';
            }
        } else {
            out += "con int " + scope + " : " + to_string(std::get<Intensional>(c.relation).expr);
        }
        out += '\n';
    }
    return out;
}

inline void write_instance_file(const Problem& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write instance file '" + path + "'");
    out << serialize_instance(p);
    if (!out) throw Error("failed writing instance file '" + path + "'");
}

}  // namespace setbranch

#endif
