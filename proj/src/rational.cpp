#include "biham/rational.hpp"

#include <cctype>
#include <ostream>

namespace biham {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
}

Rational Rational::from_string(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' ||
                  (c == '-' && (i == 0 || s[i - 1] == '/'));
        if (!ok) throw std::invalid_argument("bad rational literal: " + s);
    }
    Rational r;
    if (mpq_set_str(r.q_, s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (mpz_sgn(mpq_denref(r.q_)) == 0)
        throw std::invalid_argument("rational with zero denominator: " + s);
    mpq_canonicalize(r.q_);
    return r;
}

bool Rational::fits_long() const {
    return is_integer() && mpz_fits_slong_p(mpq_numref(q_));
}

long Rational::to_long() const {
    if (!fits_long()) throw std::overflow_error("rational does not fit long");
    return mpz_get_si(mpq_numref(q_));
}

Rational Rational::operator-() const {
    Rational r(*this);
    mpq_neg(r.q_, r.q_);
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    mpq_div(q_, q_, o.q_);
    return *this;
}

Rational Rational::pow_int(long e) const {
    if (e == 0) return Rational(1);
    if (is_zero()) {
        if (e < 0) throw std::domain_error("zero to a negative power");
        return Rational(0);
    }
    Rational base = e > 0 ? *this : Rational(1) / *this;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

Rational Rational::gcd(const Rational& a, const Rational& b) {
    Rational out;
    mpz_gcd(mpq_numref(out.q_), mpq_numref(a.q_), mpq_numref(b.q_));
    mpz_lcm(mpq_denref(out.q_), mpq_denref(a.q_), mpq_denref(b.q_));
    mpq_canonicalize(out.q_);
    return out;
}

bool Rational::nth_root_exact(unsigned long k, Rational& out) const {
    if (k == 0) return false;
    if (sign() < 0) return false;
    mpz_t rn, rd;
    mpz_init(rn);
    mpz_init(rd);
    int exact_n = mpz_root(rn, mpq_numref(q_), k);
    int exact_d = mpz_root(rd, mpq_denref(q_), k);
    bool ok = exact_n != 0 && exact_d != 0;
    if (ok) {
        mpq_set_num(out.q_, rn);
        mpq_set_den(out.q_, rd);
        mpq_canonicalize(out.q_);
    }
    mpz_clear(rn);
    mpz_clear(rd);
    return ok;
}

std::string Rational::str() const {
    char* cs = mpq_get_str(nullptr, 10, q_);
    std::string s(cs);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(cs, s.size() + 1);
    return s;
}

size_t Rational::hash() const {
    size_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](size_t x) {
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<size_t>(mpz_get_si(mpq_numref(q_))));
    mix(static_cast<size_t>(mpz_get_si(mpq_denref(q_))));
    mix(static_cast<size_t>(mpz_sizeinbase(mpq_numref(q_), 2)));
    return h;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace biham
