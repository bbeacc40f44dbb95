#pragma once

#include <string>
#include <utility>

#include <mpfr.h>

#include "biham/rational.hpp"

namespace biham {

/// Arbitrary-precision binary float (MPFR). Each value carries its working
/// precision in bits; binary operations compute at the larger of the two.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    static Real from_rational(const Rational& r, mpfr_prec_t prec);
    static Real from_long(long n, mpfr_prec_t prec);
    /// 2^e at the given precision (exact).
    static Real pow2(long e, mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    Real operator-() const;

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    Real abs() const;
    Real max(const Real& o) const;

    /// Decimal rendering with the given number of significant digits,
    /// scientific form, deterministic for a fixed value and precision.
    std::string str(int significant_digits = 32) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

/// Complex number over Real with principal-branch elementary functions.
/// The function set is exactly what expression evaluation needs: exp, log,
/// rational powers, arctanh (as log((1+z)/(1-z))/2), and magnitude.
class Complex {
public:
    explicit Complex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    static Complex from_rational(const Rational& r, mpfr_prec_t prec) {
        return Complex(Real::from_rational(r, prec), Real(prec));
    }

    mpfr_prec_t prec() const { return re.prec(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend Complex operator+(const Complex& a, const Complex& b) {
        return Complex(a.re + b.re, a.im + b.im);
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return Complex(a.re - b.re, a.im - b.im);
    }
    friend Complex operator*(const Complex& a, const Complex& b);
    friend Complex operator/(const Complex& a, const Complex& b);
    Complex operator-() const { return Complex(-re, -im); }

    Real magnitude() const;

    /// "re+imi" / "re-imi" with the given significant digits per part.
    std::string str(int significant_digits = 32) const;

    Real re;
    Real im;
};

Complex complex_exp(const Complex& z);
/// Principal branch: log|z| + i*atan2(im, re); domain error at z = 0.
Complex complex_log(const Complex& z);
/// Principal branch z^(p/q); integer exponents use binary powering.
Complex complex_pow(const Complex& z, const Rational& e);
/// log((1+z)/(1-z)) / 2; domain error at z = +-1.
Complex complex_arctanh(const Complex& z);

} // namespace biham
