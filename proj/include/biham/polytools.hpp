#pragma once

#include <map>
#include <optional>

#include "biham/expr.hpp"

namespace biham {

/// Monomial over expression atoms (symbols, function nodes, opaque
/// powers): sorted (atom, exponent) pairs with nonzero rational exponents.
struct Monomial {
    std::vector<std::pair<Expr, Rational>> factors;
};

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate Laurent polynomial: monomial -> rational coefficient.
using Poly = std::map<Monomial, Rational, MonoLess>;

struct Fraction {
    Poly num;
    Poly den; // never the zero polynomial
};

Poly poly_const(const Rational& c);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
bool poly_is_zero(const Poly& a);
bool poly_is_one(const Poly& a);

/// Exact division; nullopt when q does not divide p (or q is zero).
std::optional<Poly> poly_div_exact(const Poly& p, const Poly& q);

/// Total conversion: any expression becomes a fraction of polynomials in
/// its atoms. Non-rational structure (fractional powers of compounds,
/// function nodes) is absorbed into atoms.
Fraction to_fraction(const Expr& e);

Expr poly_to_expr(const Poly& p);
Expr fraction_to_expr(const Fraction& f);

/// Flattens nested quotients into a single reduced num/den quotient with
/// expanded polynomial parts. Semantics-preserving.
Expr rational_normalize(const Expr& e);

size_t node_count(const Expr& e);

} // namespace biham
