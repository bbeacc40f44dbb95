#include "biham/numeric.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace biham {

namespace {
mpfr_prec_t join_prec(const Real& a, const Real& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
}
} // namespace

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real Real::from_rational(const Rational& r, mpfr_prec_t prec) {
    Real x(prec);
    mpfr_set_q(x.v_, r.raw(), MPFR_RNDN);
    return x;
}

Real Real::from_long(long n, mpfr_prec_t prec) {
    Real x(prec);
    mpfr_set_si(x.v_, n, MPFR_RNDN);
    return x;
}

Real Real::pow2(long e, mpfr_prec_t prec) {
    Real x(prec);
    mpfr_set_si_2exp(x.v_, 1, e, MPFR_RNDN);
    return x;
}

Real operator+(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    Real r(join_prec(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real Real::operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::abs() const {
    Real r(prec());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::max(const Real& o) const {
    Real r(join_prec(*this, o));
    mpfr_max(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

std::string Real::str(int significant_digits) const {
    if (significant_digits < 2) significant_digits = 2;
    char fmt[32];
    std::snprintf(fmt, sizeof(fmt), "%%.%dRe", significant_digits - 1);
    int need = mpfr_snprintf(nullptr, 0, fmt, v_);
    std::vector<char> buf(static_cast<size_t>(need) + 1);
    mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
    return std::string(buf.data());
}

Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex operator/(const Complex& a, const Complex& b) {
    Real den = b.re * b.re + b.im * b.im;
    if (den.is_zero()) throw std::domain_error("complex division by zero");
    return Complex((a.re * b.re + a.im * b.im) / den,
                   (a.im * b.re - a.re * b.im) / den);
}

Real Complex::magnitude() const {
    Real r(prec());
    mpfr_hypot(r.raw(), re.raw(), im.raw(), MPFR_RNDN);
    return r;
}

std::string Complex::str(int significant_digits) const {
    std::string rs = re.str(significant_digits);
    std::string is = im.abs().str(significant_digits);
    char s = im.sign() < 0 ? '-' : '+';
    return rs + s + is + "i";
}

Complex complex_exp(const Complex& z) {
    mpfr_prec_t p = z.prec();
    Real er(p), c(p), s(p);
    mpfr_exp(er.raw(), z.re.raw(), MPFR_RNDN);
    mpfr_sin_cos(s.raw(), c.raw(), z.im.raw(), MPFR_RNDN);
    return Complex(er * c, er * s);
}

Complex complex_log(const Complex& z) {
    if (z.is_zero()) throw std::domain_error("log of zero");
    mpfr_prec_t p = z.prec();
    Real mag = z.magnitude();
    Real lr(p), arg(p);
    mpfr_log(lr.raw(), mag.raw(), MPFR_RNDN);
    mpfr_atan2(arg.raw(), z.im.raw(), z.re.raw(), MPFR_RNDN);
    return Complex(lr, arg);
}

Complex complex_pow(const Complex& z, const Rational& e) {
    mpfr_prec_t p = z.prec();
    if (e.is_zero()) return Complex::from_rational(Rational(1), p);
    if (z.is_zero()) {
        if (e.sign() < 0) throw std::domain_error("zero to a negative power");
        return Complex(p);
    }
    if (e.is_integer() && e.fits_long()) {
        long n = e.to_long();
        Complex base = n > 0 ? z : Complex::from_rational(Rational(1), p) / z;
        unsigned long k = static_cast<unsigned long>(n > 0 ? n : -n);
        Complex acc = Complex::from_rational(Rational(1), p);
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }
    Complex lz = complex_log(z);
    Complex ez(Real::from_rational(e, p) * lz.re, Real::from_rational(e, p) * lz.im);
    return complex_exp(ez);
}

Complex complex_arctanh(const Complex& z) {
    mpfr_prec_t p = z.prec();
    Complex one = Complex::from_rational(Rational(1), p);
    Complex num = one + z;
    Complex den = one - z;
    if (den.is_zero() || num.is_zero()) throw std::domain_error("arctanh at +-1");
    Complex l = complex_log(num / den);
    Real half = Real::from_rational(Rational(1, 2), p);
    return Complex(half * l.re, half * l.im);
}

} // namespace biham
