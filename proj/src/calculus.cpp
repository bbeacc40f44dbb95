#include "biham/expr.hpp"

#include "biham/polytools.hpp"

namespace biham {

Expr derivative(const Expr& e, const std::string& symbol) {
    if (!contains(e, symbol)) return num(0);
    switch (e->kind) {
    case Kind::Rational:
        return num(0);
    case Kind::Symbol:
        return e->name == symbol ? num(1) : num(0);
    case Kind::Sum: {
        std::vector<Expr> parts;
        parts.reserve(e->kids.size());
        for (const auto& k : e->kids) parts.push_back(derivative(k, symbol));
        return add(std::move(parts));
    }
    case Kind::Product: {
        std::vector<Expr> parts;
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (!contains(e->kids[i], symbol)) continue;
            std::vector<Expr> factors;
            factors.reserve(e->kids.size());
            for (size_t j = 0; j < e->kids.size(); ++j)
                factors.push_back(i == j ? derivative(e->kids[j], symbol) : e->kids[j]);
            parts.push_back(mul(std::move(factors)));
        }
        return add(std::move(parts));
    }
    case Kind::Power: {
        const Expr& base = e->kids.front();
        Rational r = e->value;
        return mul({num(r), pow(base, r - Rational(1)), derivative(base, symbol)});
    }
    case Kind::Exp:
        return mul(e, derivative(e->kids.front(), symbol));
    case Kind::Log:
        return mul(derivative(e->kids.front(), symbol), pow(e->kids.front(), Rational(-1)));
    case Kind::ArcTanh: {
        const Expr& x = e->kids.front();
        Expr den = sub(num(1), pow(x, Rational(2)));
        return mul(derivative(x, symbol), pow(std::move(den), Rational(-1)));
    }
    }
    throw std::logic_error("unreachable");
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& map) {
    if (map.empty()) return e;
    bool relevant = false;
    for (const auto& [s, r] : map)
        if (contains(e, s)) { relevant = true; break; }
    if (!relevant) return e;
    switch (e->kind) {
    case Kind::Rational:
        return e;
    case Kind::Symbol: {
        auto it = map.find(e->name);
        return it == map.end() ? e : it->second;
    }
    case Kind::Sum:
    case Kind::Product: {
        std::vector<Expr> parts;
        parts.reserve(e->kids.size());
        for (const auto& k : e->kids) parts.push_back(substitute(k, map));
        return e->kind == Kind::Sum ? add(std::move(parts)) : mul(std::move(parts));
    }
    case Kind::Power:
        return pow(substitute(e->kids.front(), map), e->value);
    case Kind::Exp:
        return exp_(substitute(e->kids.front(), map));
    case Kind::Log:
        return log_(substitute(e->kids.front(), map));
    case Kind::ArcTanh:
        return atanh_(substitute(e->kids.front(), map));
    }
    throw std::logic_error("unreachable");
}

namespace {

Expr rebuild(const Expr& e) {
    switch (e->kind) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::Sum:
    case Kind::Product: {
        std::vector<Expr> parts;
        parts.reserve(e->kids.size());
        for (const auto& k : e->kids) parts.push_back(rebuild(k));
        return e->kind == Kind::Sum ? add(std::move(parts)) : mul(std::move(parts));
    }
    case Kind::Power:
        return pow(rebuild(e->kids.front()), e->value);
    case Kind::Exp:
        return exp_(rebuild(e->kids.front()));
    case Kind::Log:
        return log_(rebuild(e->kids.front()));
    case Kind::ArcTanh:
        return atanh_(rebuild(e->kids.front()));
    }
    throw std::logic_error("unreachable");
}

} // namespace

Expr simplify(const Expr& e) {
    Expr base = rebuild(e);
    Expr normal = rational_normalize(base);
    return node_count(normal) <= node_count(base) ? normal : base;
}

namespace {

// Terms of a sum (or the expression itself when not a sum).
std::vector<Expr> sum_terms(const Expr& e) {
    if (e->kind == Kind::Sum) return e->kids;
    return {e};
}

Expr distribute(const Expr& a, const Expr& b) {
    std::vector<Expr> out;
    for (const auto& ta : sum_terms(a))
        for (const auto& tb : sum_terms(b))
            out.push_back(mul(ta, tb));
    return add(std::move(out));
}

} // namespace

Expr expand(const Expr& e) {
    switch (e->kind) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::Sum: {
        std::vector<Expr> parts;
        parts.reserve(e->kids.size());
        for (const auto& k : e->kids) parts.push_back(expand(k));
        return add(std::move(parts));
    }
    case Kind::Product: {
        Expr acc = num(1);
        for (const auto& k : e->kids) acc = distribute(acc, expand(k));
        return acc;
    }
    case Kind::Power: {
        Expr base = expand(e->kids.front());
        const Rational& r = e->value;
        if (base->kind == Kind::Sum && r.is_integer() && r.fits_long()) {
            long k = r.to_long();
            long mag = k > 0 ? k : -k;
            if (mag <= 64) {
                Expr acc = num(1);
                for (long i = 0; i < mag; ++i) acc = distribute(acc, base);
                return k > 0 ? acc : pow(std::move(acc), Rational(-1));
            }
        }
        return pow(std::move(base), r);
    }
    case Kind::Exp:
        return exp_(expand(e->kids.front()));
    case Kind::Log:
        return log_(expand(e->kids.front()));
    case Kind::ArcTanh:
        return atanh_(expand(e->kids.front()));
    }
    throw std::logic_error("unreachable");
}

namespace {

std::vector<Expr> poly_add(std::vector<Expr> a, const std::vector<Expr>& b) {
    if (a.size() < b.size()) a.resize(b.size(), num(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] = add(a[i], b[i]);
    return a;
}

std::vector<Expr> poly_mul(const std::vector<Expr>& a, const std::vector<Expr>& b, size_t cap) {
    std::vector<Expr> out(a.size() + b.size() - 1, num(0));
    if (out.size() > cap)
        throw std::domain_error("polynomial degree exceeds bound");
    for (size_t i = 0; i < a.size(); ++i) {
        if (is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (is_zero(b[j])) continue;
            out[i + j] = add(out[i + j], mul(a[i], b[j]));
        }
    }
    return out;
}

std::vector<Expr> poly_collect(const Expr& e, const std::string& s, size_t cap) {
    if (!contains(e, s)) return {e};
    switch (e->kind) {
    case Kind::Symbol:
        return {num(0), num(1)};
    case Kind::Sum: {
        std::vector<Expr> acc{num(0)};
        for (const auto& k : e->kids) acc = poly_add(std::move(acc), poly_collect(k, s, cap));
        return acc;
    }
    case Kind::Product: {
        std::vector<Expr> acc{num(1)};
        for (const auto& k : e->kids) acc = poly_mul(acc, poly_collect(k, s, cap), cap);
        return acc;
    }
    case Kind::Power: {
        const Rational& r = e->value;
        if (!r.is_integer() || r.sign() < 0 || !r.fits_long())
            throw std::domain_error("expression is not polynomial in " + s);
        std::vector<Expr> base = poly_collect(e->kids.front(), s, cap);
        std::vector<Expr> acc{num(1)};
        for (long i = 0; i < r.to_long(); ++i) acc = poly_mul(acc, base, cap);
        return acc;
    }
    default:
        throw std::domain_error("expression is not polynomial in " + s);
    }
}

} // namespace

std::vector<Expr> poly_coeffs(const Expr& e, const std::string& symbol, int max_degree) {
    std::vector<Expr> c = poly_collect(e, symbol, static_cast<size_t>(max_degree) + 1);
    while (c.size() > 1 && is_zero(c.back())) c.pop_back();
    return c;
}

} // namespace biham
