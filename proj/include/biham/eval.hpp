#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "biham/expr.hpp"
#include "biham/numeric.hpp"

namespace biham {

/// Assignment of every free symbol to a complex value, all at one precision.
struct EvalPoint {
    mpfr_prec_t precision = 256;
    std::map<std::string, Complex> values;

    void set(const std::string& name, Complex v) { values.insert_or_assign(name, std::move(v)); }
    void set_rational(const std::string& name, const Rational& r) {
        values.insert_or_assign(name, Complex::from_rational(r, precision));
    }
};

/// Raised when evaluation hits log 0, 0^negative, arctanh(+-1), or a
/// division by zero; carries the offending subterm rendered.
struct SingularEvaluation : std::runtime_error {
    std::string subterm;
    SingularEvaluation(std::string term, const std::string& what)
        : std::runtime_error(what + " in subterm " + term), subterm(std::move(term)) {}
};

struct EvalResult {
    Complex value;
    Real max_magnitude; // largest magnitude among all intermediate values
};

/// Evaluates with principal branches for log, arctanh and non-integer
/// powers. Shared subtrees are evaluated once. Throws SingularEvaluation
/// on singular input and std::invalid_argument on an unassigned symbol.
EvalResult evaluate(const Expr& e, const EvalPoint& point);

} // namespace biham
