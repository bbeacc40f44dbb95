#include "biham/polytools.hpp"

#include <algorithm>
#include <numeric>

namespace biham {

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t i = 0; i < n; ++i) {
        int c = cmp(a.factors[i].first, b.factors[i].first);
        if (c != 0) return c < 0;
        if (a.factors[i].second != b.factors[i].second)
            return a.factors[i].second < b.factors[i].second;
    }
    return a.factors.size() < b.factors.size();
}

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && cmp(a.factors[i].first, b.factors[j].first) < 0)) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || cmp(b.factors[j].first, a.factors[i].first) < 0) {
            out.factors.push_back(b.factors[j++]);
        } else {
            Rational e = a.factors[i].second + b.factors[j].second;
            if (!e.is_zero()) out.factors.emplace_back(a.factors[i].first, e);
            ++i;
            ++j;
        }
    }
    return out;
}

void poly_accum(Poly& p, const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

} // namespace

Poly poly_const(const Rational& c) {
    Poly p;
    if (!c.is_zero()) p.emplace(Monomial{}, c);
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b) poly_accum(out, m, c);
    return out;
}

Poly poly_neg(const Poly& a) {
    Poly out;
    for (const auto& [m, c] : a) out.emplace(m, -c);
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) poly_accum(out, mono_mul(ma, mb), ca * cb);
    return out;
}

bool poly_is_zero(const Poly& a) { return a.empty(); }

bool poly_is_one(const Poly& a) {
    return a.size() == 1 && a.begin()->first.factors.empty() && a.begin()->second.is_one();
}

namespace {

Poly poly_pow_uint(const Poly& a, unsigned long k) {
    Poly acc = poly_const(Rational(1));
    for (unsigned long i = 0; i < k; ++i) acc = poly_mul(acc, a);
    return acc;
}

// Integer-lattice view used by exact division: atoms with scaled, shifted
// exponents so the standard multivariate division algorithm applies.
struct Lattice {
    std::vector<Expr> atoms;                       // sorted
    std::vector<unsigned long> scale;              // per-atom exponent lcm
    std::vector<long> shift_p, shift_q;            // per-atom minima

    size_t index_of(const Expr& a) const {
        for (size_t i = 0; i < atoms.size(); ++i)
            if (cmp(atoms[i], a) == 0) return i;
        throw std::logic_error("atom not in lattice");
    }
};

using IMono = std::vector<long>; // exponent per lattice atom
using IPoly = std::map<IMono, Rational>;

void gather_atoms(const Poly& p, std::vector<Expr>& atoms) {
    for (const auto& [m, c] : p)
        for (const auto& [a, e] : m.factors) {
            bool found = false;
            for (const auto& x : atoms)
                if (cmp(x, a) == 0) { found = true; break; }
            if (!found) atoms.push_back(a);
        }
}

IPoly to_lattice(const Poly& p, const Lattice& lat, const std::vector<long>& shift) {
    IPoly out;
    for (const auto& [m, c] : p) {
        IMono im(lat.atoms.size(), 0);
        for (const auto& [a, e] : m.factors) {
            size_t i = lat.index_of(a);
            Rational scaled = e * Rational(static_cast<long>(lat.scale[i]));
            im[i] = scaled.to_long();
        }
        for (size_t i = 0; i < im.size(); ++i) im[i] -= shift[i];
        out.emplace(std::move(im), c);
    }
    return out;
}

std::vector<long> min_exponents(const Poly& p, const Lattice& lat) {
    std::vector<long> mins(lat.atoms.size(), 0);
    std::vector<bool> seen(lat.atoms.size(), false);
    for (const auto& [m, c] : p) {
        std::vector<long> exps(lat.atoms.size(), 0);
        for (const auto& [a, e] : m.factors) {
            size_t i = lat.index_of(a);
            exps[i] = (e * Rational(static_cast<long>(lat.scale[i]))).to_long();
        }
        for (size_t i = 0; i < exps.size(); ++i) {
            if (!seen[i] || exps[i] < mins[i]) mins[i] = exps[i];
            seen[i] = true;
        }
    }
    return mins;
}

} // namespace

std::optional<Poly> poly_div_exact(const Poly& p, const Poly& q) {
    if (poly_is_zero(q)) return std::nullopt;
    if (poly_is_zero(p)) return poly_const(Rational(0));

    Lattice lat;
    gather_atoms(p, lat.atoms);
    gather_atoms(q, lat.atoms);
    std::sort(lat.atoms.begin(), lat.atoms.end(), [](const Expr& a, const Expr& b) { return cmp(a, b) < 0; });
    lat.scale.assign(lat.atoms.size(), 1);
    for (const Poly* poly : {&p, &q})
        for (const auto& [m, c] : *poly)
            for (const auto& [a, e] : m.factors) {
                size_t i = lat.index_of(a);
                unsigned long den = mpz_get_ui(mpq_denref(e.raw()));
                lat.scale[i] = std::lcm(lat.scale[i], den);
            }
    lat.shift_p = min_exponents(p, lat);
    lat.shift_q = min_exponents(q, lat);

    IPoly ip = to_lattice(p, lat, lat.shift_p);
    IPoly iq = to_lattice(q, lat, lat.shift_q);

    IPoly quotient;
    const auto& qlead = *iq.rbegin();
    int guard = 0;
    while (!ip.empty()) {
        if (++guard > 20000) return std::nullopt;
        const auto& plead = *ip.rbegin();
        IMono diff(plead.first.size());
        for (size_t i = 0; i < diff.size(); ++i) {
            diff[i] = plead.first[i] - qlead.first[i];
            if (diff[i] < 0) return std::nullopt;
        }
        Rational coeff = plead.second / qlead.second;
        quotient.emplace(diff, coeff);
        // ip -= coeff * diff * iq
        for (const auto& [m, c] : iq) {
            IMono t(m.size());
            for (size_t i = 0; i < m.size(); ++i) t[i] = m[i] + diff[i];
            auto it = ip.find(t);
            Rational nv = (it == ip.end() ? Rational(0) : it->second) - coeff * c;
            if (it != ip.end()) ip.erase(it);
            if (!nv.is_zero()) ip.emplace(std::move(t), nv);
        }
    }

    Poly out;
    for (const auto& [im, c] : quotient) {
        Monomial m;
        for (size_t i = 0; i < im.size(); ++i) {
            long e = im[i] + lat.shift_p[i] - lat.shift_q[i];
            if (e == 0) continue;
            m.factors.emplace_back(lat.atoms[i],
                                   Rational(e) / Rational(static_cast<long>(lat.scale[i])));
        }
        out.emplace(std::move(m), c);
    }
    return out;
}

namespace {

// Canonical scaling and cancellation of a fraction.
Fraction reduce(Poly n, Poly d) {
    if (poly_is_zero(n)) return {poly_const(Rational(0)), poly_const(Rational(1))};

    // cancel the common monomial content (also clears negative exponents)
    {
        std::vector<Expr> atoms;
        gather_atoms(n, atoms);
        gather_atoms(d, atoms);
        Monomial common;
        for (const auto& a : atoms) {
            bool first = true;
            Rational m(0);
            for (const Poly* poly : {&n, &d})
                for (const auto& [mono, c] : *poly) {
                    Rational e(0);
                    for (const auto& [atom, ex] : mono.factors)
                        if (cmp(atom, a) == 0) { e = ex; break; }
                    if (first || e < m) m = e;
                    first = false;
                }
            if (!m.is_zero()) common.factors.emplace_back(a, -m);
        }
        if (!common.factors.empty()) {
            std::sort(common.factors.begin(), common.factors.end(),
                      [](const auto& x, const auto& y) { return cmp(x.first, y.first) < 0; });
            Poly shift;
            shift.emplace(common, Rational(1));
            n = poly_mul(n, shift);
            d = poly_mul(d, shift);
        }
    }

    // single-monomial denominators fold into the numerator exactly
    if (d.size() == 1) {
        Monomial inv;
        for (const auto& [a, e] : d.begin()->first.factors) inv.factors.emplace_back(a, -e);
        Poly shift;
        shift.emplace(inv, Rational(1) / d.begin()->second);
        return {poly_mul(n, shift), poly_const(Rational(1))};
    }

    if (auto q = poly_div_exact(n, d)) return {*q, poly_const(Rational(1))};
    if (n.size() > 1) {
        if (auto q = poly_div_exact(d, n)) {
            if (!poly_is_zero(*q)) return reduce(poly_const(Rational(1)), *q);
        }
    }

    // make the denominator content-free with a positive leading coefficient
    Rational content(0);
    for (const auto& [m, c] : d) content = Rational::gcd(content, c);
    if (d.rbegin()->second.sign() < 0) content = -content;
    if (!content.is_one() && !content.is_zero()) {
        Poly scale = poly_const(Rational(1) / content);
        n = poly_mul(n, scale);
        d = poly_mul(d, scale);
    }
    return {std::move(n), std::move(d)};
}

Fraction frac_add(const Fraction& a, const Fraction& b) {
    if (auto q = poly_div_exact(a.den, b.den))
        return reduce(poly_add(a.num, poly_mul(b.num, *q)), a.den);
    if (auto q = poly_div_exact(b.den, a.den))
        return reduce(poly_add(poly_mul(a.num, *q), b.num), b.den);
    return reduce(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                  poly_mul(a.den, b.den));
}

Fraction frac_mul(const Fraction& a, const Fraction& b) {
    return reduce(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

Fraction frac_atom(const Expr& e) {
    Poly p;
    Monomial m;
    m.factors.emplace_back(e, Rational(1));
    p.emplace(std::move(m), Rational(1));
    return {std::move(p), poly_const(Rational(1))};
}

Fraction frac_pow(const Fraction& f, const Rational& e, const Expr& whole);

Fraction frac_of(const Expr& e) {
    switch (e->kind) {
    case Kind::Rational:
        return {poly_const(e->value), poly_const(Rational(1))};
    case Kind::Symbol:
    case Kind::Exp:
    case Kind::Log:
    case Kind::ArcTanh:
        return frac_atom(e);
    case Kind::Sum: {
        Fraction acc{poly_const(Rational(0)), poly_const(Rational(1))};
        for (const auto& k : e->kids) acc = frac_add(acc, frac_of(k));
        return acc;
    }
    case Kind::Product: {
        Fraction acc{poly_const(Rational(1)), poly_const(Rational(1))};
        for (const auto& k : e->kids) acc = frac_mul(acc, frac_of(k));
        return acc;
    }
    case Kind::Power:
        return frac_pow(frac_of(e->kids.front()), e->value, e);
    }
    throw std::logic_error("unreachable");
}

Fraction frac_pow(const Fraction& f, const Rational& e, const Expr& whole) {
    if (e.is_integer() && e.fits_long()) {
        long k = e.to_long();
        if (k >= 0)
            return reduce(poly_pow_uint(f.num, static_cast<unsigned long>(k)),
                          poly_pow_uint(f.den, static_cast<unsigned long>(k)));
        if (poly_is_zero(f.num)) return frac_atom(whole); // 0^negative: leave symbolic
        return reduce(poly_pow_uint(f.den, static_cast<unsigned long>(-k)),
                      poly_pow_uint(f.num, static_cast<unsigned long>(-k)));
    }
    // fractional power: keep the power of a single atom-monomial exact,
    // otherwise the whole power node is an atom
    const Expr& base = whole->kids.front();
    if (base->kind == Kind::Symbol || base->kind == Kind::Exp || base->kind == Kind::Log ||
        base->kind == Kind::ArcTanh) {
        Poly p;
        Monomial m;
        m.factors.emplace_back(base, e);
        p.emplace(std::move(m), Rational(1));
        return {std::move(p), poly_const(Rational(1))};
    }
    return frac_atom(whole);
}

} // namespace

Fraction to_fraction(const Expr& e) { return frac_of(e); }

Expr poly_to_expr(const Poly& p) {
    std::vector<Expr> terms;
    for (const auto& [m, c] : p) {
        std::vector<Expr> factors{num(c)};
        for (const auto& [a, e] : m.factors) factors.push_back(pow(a, e));
        terms.push_back(mul(std::move(factors)));
    }
    return add(std::move(terms));
}

Expr fraction_to_expr(const Fraction& f) {
    Expr n = poly_to_expr(f.num);
    if (poly_is_one(f.den)) return n;
    return mul(std::move(n), pow(poly_to_expr(f.den), Rational(-1)));
}

Expr rational_normalize(const Expr& e) { return fraction_to_expr(to_fraction(e)); }

size_t node_count(const Expr& e) {
    size_t n = 1;
    for (const auto& k : e->kids) n += node_count(k);
    return n;
}

} // namespace biham
