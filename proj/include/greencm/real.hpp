#pragma once

// RAII value types over MPFR. Every Real carries its own binary precision;
// binary operations round to the larger of the two operand precisions.

#include <mpfr.h>
#include <gmpxx.h>

#include <string>
#include <utility>

namespace greencm {

using Precision = mpfr_prec_t;

class Real {
 public:
  explicit Real(Precision prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(long value, Precision prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(double value, Precision prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, value, MPFR_RNDN); }
  Real(const mpq_class& value, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  Real(const mpz_class& value, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  Real(const std::string& decimal, Precision prec);

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    if (this != &other) mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  Precision precision() const { return mpfr_get_prec(v_); }

  // Copy of this value rounded to a new precision.
  Real with_precision(Precision prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // floor(log2|x|)+1 for nonzero x; a large negative number for zero.
  long exponent2() const { return is_zero() ? -(1L << 40) : mpfr_get_exp(v_); }

  // Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits) const;
  // Fixed notation with `decimals` digits after the point.
  std::string to_fixed(int decimals) const;

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
  Real& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }

 private:
  mpfr_t v_;
};

inline Precision max_prec(const Real& a, const Real& b) {
  return a.precision() > b.precision() ? a.precision() : b.precision();
}

inline Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b)); mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b)); mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b)); mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b)); mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline Real operator-(const Real& a) {
  Real r(a.precision()); mpfr_neg(r.raw(), a.raw(), MPFR_RNDN); return r;
}
inline Real operator*(const Real& a, long b) {
  Real r(a.precision()); mpfr_mul_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline Real operator*(long b, const Real& a) { return a * b; }
inline Real operator/(const Real& a, long b) {
  Real r(a.precision()); mpfr_div_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline Real operator+(const Real& a, long b) {
  Real r(a.precision()); mpfr_add_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline Real operator-(const Real& a, long b) {
  Real r(a.precision()); mpfr_sub_si(r.raw(), a.raw(), b, MPFR_RNDN); return r;
}
inline Real operator-(long a, const Real& b) {
  Real r(b.precision()); mpfr_si_sub(r.raw(), a, b.raw(), MPFR_RNDN); return r;
}

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
inline bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) < 0; }
inline bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) > 0; }
inline bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) <= 0; }
inline bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b) >= 0; }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pi(Precision prec);
Real euler_gamma(Precision prec);
Real gamma(const Real& x);
Real lgamma(const Real& x);
Real zeta(unsigned long n, Precision prec);
Real round_to_integer(const Real& x);
mpz_class to_mpz(const Real& x);  // nearest integer
Real ldexp(const Real& x, long e);  // x * 2^e
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

// 2^e at the given precision.
Real pow2(long e, Precision prec);

struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Precision precision() const { return max_prec(re, im); }

  Complex conj() const { return Complex(re, -im); }
  Real norm() const { return re * re + im * im; }  // |z|^2
  Real abs() const;
  Real arg() const;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator-(const Complex& a);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex pow(const Complex& z, long n);
// e(z) = exp(2 pi i z)
Complex e2pi(const Complex& z);

}  // namespace greencm
