#include "biham/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace biham {

namespace {

size_t hash_combine(size_t h, size_t x) {
    return h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::vector<std::string> merge_syms(const std::vector<Expr>& kids) {
    std::vector<std::string> out;
    for (const auto& k : kids)
        out.insert(out.end(), k->syms.begin(), k->syms.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

Expr finish(std::shared_ptr<Node> n) {
    size_t h = hash_combine(0x811c9dc5u, static_cast<size_t>(n->kind));
    switch (n->kind) {
    case Kind::Rational: h = hash_combine(h, n->value.hash()); break;
    case Kind::Symbol: h = hash_combine(h, std::hash<std::string>{}(n->name)); break;
    case Kind::Power: h = hash_combine(h, n->value.hash()); break;
    default: break;
    }
    for (const auto& k : n->kids) h = hash_combine(h, k->hash);
    n->hash = h;
    if (n->kind != Kind::Rational) n->syms = merge_syms(n->kids);
    if (n->kind == Kind::Symbol) n->syms = {n->name};
    return n;
}

Expr make_rational(Rational r) {
    auto n = std::make_shared<Node>(Kind::Rational);
    n->value = std::move(r);
    return finish(std::move(n));
}

const Expr& zero_expr() {
    static const Expr z = make_rational(Rational(0));
    return z;
}
const Expr& one_expr() {
    static const Expr o = make_rational(Rational(1));
    return o;
}

Expr make_power_raw(Expr base, Rational e) {
    auto n = std::make_shared<Node>(Kind::Power);
    n->value = std::move(e);
    n->kids.push_back(std::move(base));
    return finish(std::move(n));
}

Expr make_fn(Kind k, Expr x) {
    auto n = std::make_shared<Node>(k);
    n->kids.push_back(std::move(x));
    return finish(std::move(n));
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return cmp(a, b) < 0; }
};

// Splits a normalized term into (rational coefficient, remaining core).
std::pair<Rational, Expr> coeff_core(const Expr& t) {
    if (t->kind == Kind::Rational) return {t->value, one_expr()};
    if (t->kind == Kind::Product && t->kids.front()->kind == Kind::Rational) {
        std::vector<Expr> rest(t->kids.begin() + 1, t->kids.end());
        if (rest.size() == 1) return {t->kids.front()->value, rest.front()};
        auto n = std::make_shared<Node>(Kind::Product);
        n->kids = std::move(rest);
        return {t->kids.front()->value, finish(std::move(n))};
    }
    return {Rational(1), t};
}

// Splits a normalized factor into (base, exponent).
std::pair<Expr, Rational> base_expo(const Expr& f) {
    if (f->kind == Kind::Power) return {f->kids.front(), f->value};
    return {f, Rational(1)};
}

} // namespace

Expr num(long n) {
    if (n == 0) return zero_expr();
    if (n == 1) return one_expr();
    return make_rational(Rational(n));
}

Expr num(Rational r) { return make_rational(std::move(r)); }

Expr sym(std::string name) {
    auto n = std::make_shared<Node>(Kind::Symbol);
    n->name = std::move(name);
    return finish(std::move(n));
}

Expr add(std::vector<Expr> terms) {
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> collected;
    std::vector<Expr> work(std::move(terms));
    while (!work.empty()) {
        Expr t = std::move(work.back());
        work.pop_back();
        if (t->kind == Kind::Sum) {
            work.insert(work.end(), t->kids.begin(), t->kids.end());
            continue;
        }
        if (t->kind == Kind::Rational) {
            constant += t->value;
            continue;
        }
        auto [c, core] = coeff_core(t);
        if (core->kind == Kind::Sum) {
            // c*(x + y) as a bare term: distribute the coefficient so the
            // parts merge with the enclosing sum.
            for (const auto& k : core->kids) work.push_back(mul(make_rational(c), k));
            continue;
        }
        auto it = collected.find(core);
        if (it == collected.end())
            collected.emplace(core, c);
        else
            it->second += c;
    }
    std::vector<Expr> out;
    if (!constant.is_zero()) out.push_back(make_rational(constant));
    for (const auto& [core, c] : collected) {
        if (c.is_zero()) continue;
        if (c.is_one())
            out.push_back(core);
        else
            out.push_back(mul({make_rational(c), core}));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return cmp(a, b) < 0; });
    auto n = std::make_shared<Node>(Kind::Sum);
    n->kids = std::move(out);
    return finish(std::move(n));
}

Expr mul(std::vector<Expr> factors) {
    Rational coeff(1);
    std::map<Expr, Rational, ExprLess> bases;
    std::vector<Expr> work(std::move(factors));
    int guard = 0;
    while (!work.empty()) {
        if (++guard > 100000) throw std::runtime_error("product normalization did not settle");
        Expr f = std::move(work.back());
        work.pop_back();
        if (f->kind == Kind::Product) {
            work.insert(work.end(), f->kids.begin(), f->kids.end());
            continue;
        }
        if (f->kind == Kind::Rational) {
            coeff *= f->value;
            if (coeff.is_zero()) return zero_expr();
            continue;
        }
        auto [base, e] = base_expo(f);
        auto it = bases.find(base);
        if (it == bases.end())
            bases.emplace(base, e);
        else
            it->second += e;
    }
    std::vector<Expr> out;
    for (const auto& [base, e] : bases) {
        if (e.is_zero()) continue;
        Expr f = pow(base, e);
        if (f->kind == Kind::Rational)
            coeff *= f->value;
        else if (f->kind == Kind::Product) {
            // pow() may have distributed an integer power over a product;
            // fold its parts back in.
            for (const auto& k : f->kids) {
                if (k->kind == Kind::Rational)
                    coeff *= k->value;
                else
                    out.push_back(k);
            }
        } else
            out.push_back(f);
    }
    if (coeff.is_zero()) return zero_expr();
    if (out.empty()) return make_rational(coeff);
    if (!coeff.is_one()) out.push_back(make_rational(coeff));
    if (out.size() == 1) return out.front();
    std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return cmp(a, b) < 0; });
    auto n = std::make_shared<Node>(Kind::Product);
    n->kids = std::move(out);
    return finish(std::move(n));
}

Expr pow(Expr base, Rational e) {
    if (e.is_zero()) return one_expr();
    if (e.is_one()) return base;
    if (base->kind == Kind::Rational) {
        const Rational& r = base->value;
        if (r.is_zero()) {
            if (e.sign() > 0) return zero_expr();
            return make_power_raw(std::move(base), std::move(e)); // singular, caught at evaluation
        }
        if (r.is_one()) return one_expr();
        if (e.is_integer() && e.fits_long()) return make_rational(r.pow_int(e.to_long()));
        // exact root when one exists, e.g. (9/4)^(1/2) -> 3/2
        mpz_srcptr den = mpq_denref(e.raw());
        mpz_srcptr nmr = mpq_numref(e.raw());
        if (r.sign() > 0 && mpz_fits_ulong_p(den) && mpz_fits_slong_p(nmr)) {
            Rational root;
            if (r.nth_root_exact(mpz_get_ui(den), root))
                return make_rational(root.pow_int(mpz_get_si(nmr)));
        }
        return make_power_raw(std::move(base), std::move(e));
    }
    if (e.is_integer()) {
        // (x^a)^k = x^(a k) and (x*y)^k = x^k y^k hold for all principal
        // branches when k is an integer.
        if (base->kind == Kind::Power)
            return pow(base->kids.front(), base->value * e);
        if (base->kind == Kind::Product) {
            std::vector<Expr> parts;
            parts.reserve(base->kids.size());
            for (const auto& k : base->kids) parts.push_back(pow(k, e));
            return mul(std::move(parts));
        }
    }
    return make_power_raw(std::move(base), std::move(e));
}

namespace {

// Rational content of an argument, used to canonicalize exp so that
// exp(-u), exp(2u), ... all share the atom exp(u). The sign convention
// makes the first collected term positive.
Rational arg_content(const Expr& x) {
    switch (x->kind) {
    case Kind::Rational:
        return x->value.is_zero() ? Rational(1) : x->value;
    case Kind::Product:
        return coeff_core(x).first;
    case Kind::Sum: {
        Rational g(0);
        for (const auto& t : x->kids) g = Rational::gcd(g, coeff_core(t).first);
        if (g.is_zero()) return Rational(1);
        if (coeff_core(x->kids.front()).first.sign() < 0) return -g;
        return g;
    }
    default:
        return Rational(1);
    }
}

} // namespace

Expr exp_(Expr x) {
    if (is_zero(x)) return one_expr();
    if (x->kind == Kind::Log) return x->kids.front();
    Rational content = arg_content(x);
    if (!content.is_one()) {
        Expr reduced = mul(make_rational(Rational(1) / content), x);
        return pow(exp_(std::move(reduced)), content);
    }
    return make_fn(Kind::Exp, std::move(x));
}

Expr log_(Expr x) {
    if (is_one(x)) return zero_expr();
    return make_fn(Kind::Log, std::move(x));
}

Expr atanh_(Expr x) {
    if (is_zero(x)) return zero_expr();
    return make_fn(Kind::ArcTanh, std::move(x));
}

Expr neg(Expr a) { return mul(num(-1), std::move(a)); }
Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }
Expr div(Expr a, Expr b) { return mul(std::move(a), pow(std::move(b), Rational(-1))); }

int cmp(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a->kind) {
    case Kind::Rational: {
        if (a->value == b->value) return 0;
        return a->value < b->value ? -1 : 1;
    }
    case Kind::Symbol:
        return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case Kind::Power: {
        int c = cmp(a->kids.front(), b->kids.front());
        if (c != 0) return c;
        if (a->value == b->value) return 0;
        return a->value < b->value ? -1 : 1;
    }
    default: {
        size_t n = std::min(a->kids.size(), b->kids.size());
        for (size_t i = 0; i < n; ++i) {
            int c = cmp(a->kids[i], b->kids[i]);
            if (c != 0) return c;
        }
        if (a->kids.size() != b->kids.size())
            return a->kids.size() < b->kids.size() ? -1 : 1;
        return 0;
    }
    }
}

bool equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash) return false;
    return cmp(a, b) == 0;
}

bool is_rational(const Expr& e) { return e->kind == Kind::Rational; }
bool is_zero(const Expr& e) { return e->kind == Kind::Rational && e->value.is_zero(); }
bool is_one(const Expr& e) { return e->kind == Kind::Rational && e->value.is_one(); }

const Rational& rat_value(const Expr& e) {
    if (e->kind != Kind::Rational) throw std::logic_error("rat_value on non-rational");
    return e->value;
}

const std::vector<std::string>& free_symbols(const Expr& e) { return e->syms; }

bool contains(const Expr& e, const std::string& symbol) {
    return std::binary_search(e->syms.begin(), e->syms.end(), symbol);
}

bool is_constant(const Expr& e) { return e->syms.empty(); }

namespace {

// Precedence levels for rendering: sum < product < unary < power < atom.
enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

void render_to(const Expr& e, std::ostringstream& os, int parent_prec);

void render_rational(const Rational& r, std::ostringstream& os, int parent_prec) {
    std::string s = r.str();
    bool compound = r.sign() < 0 || !r.is_integer();
    if (compound && parent_prec > kSum)
        os << '(' << s << ')';
    else
        os << s;
}

void render_product(const Expr& e, std::ostringstream& os, int parent_prec) {
    auto [c, core] = coeff_core(e);
    bool negative = c.sign() < 0;
    Rational mag = negative ? -c : c;
    int self = negative ? kUnary - 1 : kProduct;
    bool parens = parent_prec > self;
    if (parens) os << '(';
    if (negative) os << '-';
    bool first = true;
    if (!mag.is_one() || core->kind == Kind::Rational) {
        render_rational(mag, os, kProduct);
        first = false;
    }
    const std::vector<Expr> singleton{core};
    const std::vector<Expr>& factors =
        core->kind == Kind::Product ? core->kids : singleton;
    for (const auto& f : factors) {
        if (f->kind == Kind::Rational) continue; // already in the coefficient
        if (!first) os << '*';
        render_to(f, os, kProduct + 1);
        first = false;
    }
    if (parens) os << ')';
}

void render_to(const Expr& e, std::ostringstream& os, int parent_prec) {
    switch (e->kind) {
    case Kind::Rational:
        render_rational(e->value, os, parent_prec);
        return;
    case Kind::Symbol:
        os << e->name;
        return;
    case Kind::Sum: {
        bool parens = parent_prec > kSum;
        if (parens) os << '(';
        bool first = true;
        for (const auto& t : e->kids) {
            auto [c, core] = coeff_core(t);
            if (!first && c.sign() < 0) {
                os << " - ";
                Expr flipped = mul(num(-c), core);
                render_to(flipped, os, kSum + 1);
            } else {
                if (!first) os << " + ";
                render_to(t, os, first ? kSum : kSum + 1);
            }
            first = false;
        }
        if (parens) os << ')';
        return;
    }
    case Kind::Product:
        render_product(e, os, parent_prec);
        return;
    case Kind::Power: {
        bool parens = parent_prec > kPower;
        if (parens) os << '(';
        render_to(e->kids.front(), os, kPower + 1);
        os << '^';
        const Rational& ex = e->value;
        if (ex.is_integer() && ex.sign() > 0)
            os << ex.str();
        else
            os << '(' << ex.str() << ')';
        if (parens) os << ')';
        return;
    }
    case Kind::Exp:
        os << "exp(";
        render_to(e->kids.front(), os, kSum);
        os << ')';
        return;
    case Kind::Log:
        os << "log(";
        render_to(e->kids.front(), os, kSum);
        os << ')';
        return;
    case Kind::ArcTanh:
        os << "ArcTanh(";
        render_to(e->kids.front(), os, kSum);
        os << ')';
        return;
    }
}

} // namespace

std::string render(const Expr& e) {
    std::ostringstream os;
    render_to(e, os, kSum);
    return os.str();
}

} // namespace biham
