#include "biham/expr.hpp"

#include <cctype>

namespace biham {

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw ParseError(pos, std::string("expected '") + c + "'");
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (true) {
            if (accept('+'))
                lhs = add(lhs, parse_term());
            else if (accept('-'))
                lhs = sub(lhs, parse_term());
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (true) {
            if (accept('*'))
                lhs = mul(lhs, parse_unary());
            else if (accept('/'))
                lhs = div(lhs, parse_unary());
            else
                return lhs;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return neg(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) {
            // notation shorthand: a bare e raised to something is exp
            if (base->kind == Kind::Symbol && base->name == "e")
                return exp_(parse_unary());
            size_t at = pos;
            Expr e = parse_unary(); // right-associative
            if (e->kind != Kind::Rational)
                throw ParseError(at, "exponent must be a rational constant");
            return pow(std::move(base), e->value);
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= text.size()) throw ParseError(pos, "unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_integer();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }

    Expr parse_integer() {
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        return num(Rational::from_string(text.substr(start, pos - start)));
    }

    Expr parse_ident() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        skip_ws();
        bool call = pos < text.size() && text[pos] == '(';
        if (!call) return sym(std::move(name));
        ++pos;
        Expr arg = parse_expr();
        expect(')');
        if (name == "exp") return exp_(std::move(arg));
        if (name == "log") return log_(std::move(arg));
        if (name == "sqrt") return pow(std::move(arg), Rational(1, 2));
        if (name == "ArcTanh") return atanh_(std::move(arg));
        throw ParseError(start, "unknown function name '" + name + "'");
    }
};

} // namespace

Expr parse(std::string_view text) {
    Parser p{text};
    Expr e = p.parse_expr();
    if (!p.at_end())
        throw ParseError(p.pos, std::string("unexpected character '") + text[p.pos] + "'");
    return e;
}

} // namespace biham
