#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmp.h>

namespace biham {

/// Exact rational number backed by GMP. Always canonical: positive
/// denominator, gcd(num, den) = 1.
class Rational {
public:
    Rational() { mpq_init(q_); }
    Rational(long n) { mpq_init(q_); mpq_set_si(q_, n, 1); }
    Rational(long num, long den);

    Rational(const Rational& o) { mpq_init(q_); mpq_set(q_, o.q_); }
    Rational(Rational&& o) noexcept { mpq_init(q_); mpq_swap(q_, o.q_); }
    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept {
        if (this != &o) mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    /// Parses "p", "-p", "p/q". Throws std::invalid_argument on bad input.
    static Rational from_string(std::string_view text);

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
    bool is_integer() const { return mpz_cmp_si(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    /// Value as long; valid only when is_integer() and it fits.
    long to_long() const;
    bool fits_long() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { mpq_add(q_, q_, o.q_); return *this; }
    Rational& operator-=(const Rational& o) { mpq_sub(q_, q_, o.q_); return *this; }
    Rational& operator*=(const Rational& o) { mpq_mul(q_, q_, o.q_); return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return mpq_equal(a.q_, b.q_) != 0;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return mpq_cmp(a.q_, b.q_) < 0;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return mpq_cmp(a.q_, b.q_) <= 0;
    }

    /// Integer power; exponent may be negative (throws on 0^negative).
    Rational pow_int(long e) const;

    /// Positive generator of the fractional ideal: gcd of numerators over
    /// lcm of denominators. gcd(0, x) = |x|.
    static Rational gcd(const Rational& a, const Rational& b);

    /// Exact k-th root if one exists (k >= 1, requires *this >= 0).
    /// Returns false when the value is not a perfect k-th power.
    bool nth_root_exact(unsigned long k, Rational& out) const;

    /// Canonical "p" or "p/q" form.
    std::string str() const;

    size_t hash() const;

    /// Raw access for interop with mpfr (read-only).
    const __mpq_struct* raw() const { return q_; }

private:
    mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace biham

template <>
struct std::hash<biham::Rational> {
    size_t operator()(const biham::Rational& r) const { return r.hash(); }
};
