#include "greencm/real.hpp"
#include "greencm/errors.hpp"

#include <cstdlib>
#include <memory>

namespace greencm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::unavailable: return "unavailable";
    case ErrorKind::precision: return "precision";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

Real::Real(const std::string& decimal, Precision prec) {
  mpfr_init2(v_, prec);
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    throw DomainError("not a decimal number: " + decimal);
}

namespace {

std::string format(const char* fmt, int digits, mpfr_srcptr x) {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, fmt, digits, x) < 0) return "nan";
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

}  // namespace

std::string Real::to_string(int digits) const {
  return format("%.*Re", digits > 0 ? digits - 1 : 0, v_);
}

std::string Real::to_fixed(int decimals) const { return format("%.*Rf", decimals, v_); }

#define GREENCM_UNARY(name, fn)                 \
  Real name(const Real& x) {                    \
    Real r(x.precision());                      \
    fn(r.raw(), x.raw(), MPFR_RNDN);            \
    return r;                                   \
  }

GREENCM_UNARY(abs, mpfr_abs)
GREENCM_UNARY(sqrt, mpfr_sqrt)
GREENCM_UNARY(exp, mpfr_exp)
GREENCM_UNARY(log, mpfr_log)
GREENCM_UNARY(log2, mpfr_log2)
GREENCM_UNARY(sin, mpfr_sin)
GREENCM_UNARY(cos, mpfr_cos)
GREENCM_UNARY(gamma, mpfr_gamma)

#undef GREENCM_UNARY

Real lgamma(const Real& x) {
  Real r(x.precision());
  int sign = 0;
  mpfr_lgamma(r.raw(), &sign, x.raw(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(y, x));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(max_prec(x, y));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real pi(Precision prec) {
  Real r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real euler_gamma(Precision prec) {
  Real r(prec);
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

Real zeta(unsigned long n, Precision prec) {
  Real r(prec);
  mpfr_zeta_ui(r.raw(), n, MPFR_RNDN);
  return r;
}

Real round_to_integer(const Real& x) {
  Real r(x.precision());
  mpfr_round(r.raw(), x.raw());
  return r;
}

mpz_class to_mpz(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.raw(), MPFR_RNDN);
  return z;
}

Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pow2(long e, Precision prec) {
  Real r(1L, prec);
  mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}

Real Complex::abs() const {
  Real r(precision());
  mpfr_hypot(r.raw(), re.raw(), im.raw(), MPFR_RNDN);
  return r;
}

Real Complex::arg() const { return atan2(im, re); }

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }

Complex operator*(const Complex& a, const Complex& b) {
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }

Complex operator/(const Complex& a, const Complex& b) {
  Real n = b.norm();
  return Complex((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}

Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return Complex(m * cos(z.im), m * sin(z.im));
}

Complex log(const Complex& z) { return Complex(log(z.abs()), z.arg()); }

Complex pow(const Complex& z, long n) {
  if (n < 0) {
    Complex one(Real(1L, z.precision()), Real(z.precision()));
    return one / pow(z, -n);
  }
  Complex result(Real(1L, z.precision()), Real(z.precision()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Complex e2pi(const Complex& z) {
  Real twopi = pi(z.precision()) * 2L;
  return exp(Complex(-(z.im * twopi), z.re * twopi));
}

}  // namespace greencm
