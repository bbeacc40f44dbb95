#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "biham/rational.hpp"

namespace biham {

enum class Kind {
    Rational,
    Symbol,
    Power,   // base^(p/q), exponent an exact rational
    Exp,
    Log,
    ArcTanh,
    Product, // n-ary, flattened, optional rational coefficient sorted first
    Sum,     // n-ary, flattened, like terms collected
};

class Node;
using Expr = std::shared_ptr<const Node>;

/// Immutable expression node. Construction goes through the normalizing
/// builders below; a Node is never mutated after creation.
class Node {
public:
    Kind kind;
    Rational value;                 // Rational: the constant; Power: the exponent
    std::string name;               // Symbol
    std::vector<Expr> kids;         // operands / base / function argument
    std::vector<std::string> syms;  // sorted unique free symbols
    size_t hash = 0;

    Node(Kind k) : kind(k) {}
};

// Builders. Every builder returns a normalized expression: rational
// constants folded, sums and products flattened with like terms and
// like bases collected, x^0 -> 1, x^1 -> x, exp(log(x)) -> x.
Expr num(long n);
Expr num(Rational r);
Expr sym(std::string name);
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(Expr base, Rational exponent);
Expr exp_(Expr x);
Expr log_(Expr x);
Expr atanh_(Expr x);

inline Expr add(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), std::move(b)}); }
inline Expr mul(Expr a, Expr b) { return mul(std::vector<Expr>{std::move(a), std::move(b)}); }
Expr neg(Expr a);
Expr sub(Expr a, Expr b);
Expr div(Expr a, Expr b);

/// Strict total order compatible with structural equality; the order the
/// normalizer sorts operands by, so it is stable across runs.
int cmp(const Expr& a, const Expr& b);
bool equal(const Expr& a, const Expr& b);

bool is_rational(const Expr& e);
bool is_zero(const Expr& e);
bool is_one(const Expr& e);
const Rational& rat_value(const Expr& e);

const std::vector<std::string>& free_symbols(const Expr& e);
bool contains(const Expr& e, const std::string& symbol);
bool is_constant(const Expr& e);

/// Renders in the input grammar; parse(render(e)) == e.
std::string render(const Expr& e);

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(size_t off, const std::string& msg)
        : std::runtime_error(msg), offset(off) {}
};

/// Parses the expression grammar: identifiers, integer / p/q literals,
/// + - * / ^ (right-associative ^), unary minus, exp/log/sqrt/ArcTanh,
/// parentheses. Exponents must fold to rational constants.
Expr parse(std::string_view text);

/// Exact partial derivative.
Expr derivative(const Expr& e, const std::string& symbol);

/// Simultaneous substitution followed by renormalization.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& map);

/// Bottom-up renormalization through the builders. Idempotent.
Expr simplify(const Expr& e);

/// Distributes products and non-negative integer powers over sums and
/// collects like monomials. Exact cancellation for expressions polynomial
/// in their atoms (symbols, function nodes, fractional powers).
Expr expand(const Expr& e);

/// Coefficients [c0, ..., cd] of e viewed as a polynomial in `symbol`;
/// throws std::domain_error if e is not polynomial in it or the degree
/// exceeds max_degree.
std::vector<Expr> poly_coeffs(const Expr& e, const std::string& symbol, int max_degree);

} // namespace biham
