#include "greencm/special_functions.hpp"
#include "greencm/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace greencm::special {

namespace {

// Series for the incomplete gamma function are used for x below
// s + 1 + prec * kIncGammaSwitch, the continued fraction above it.
constexpr double kIncGammaSwitch = 0.1;

std::mutex poly_mutex;
std::map<int, std::vector<mpq_class>> p_cache;
std::map<int, std::vector<mpq_class>> w_cache;

std::vector<mpq_class> poly_shift_mul(const std::vector<mpq_class>& p, const mpq_class& c) {
  // c * t * p(t)
  std::vector<mpq_class> r(p.size() + 1, mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i) r[i + 1] = c * p[i];
  return r;
}

void poly_axpy(std::vector<mpq_class>& y, const mpq_class& a, const std::vector<mpq_class>& x) {
  if (y.size() < x.size()) y.resize(x.size(), mpq_class(0));
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Both P_r and W_{r-1} obey (r+1) y_{r+1} = (2r+1) t y_r - r y_{r-1}.
void extend_recurrence(std::map<int, std::vector<mpq_class>>& cache, int r) {
  for (int n = 1; n < r; ++n) {
    if (cache.count(n + 1)) continue;
    auto next = poly_shift_mul(cache.at(n), mpq_class(2 * n + 1, n + 1));
    poly_axpy(next, mpq_class(-n, n + 1), cache.at(n - 1));
    cache[n + 1] = std::move(next);
  }
}


}  // namespace

long guard_bits(long terms) {
  long g = 16;
  while (terms > 1) {
    ++g;
    terms = (terms + 1) / 2;
  }
  return g;
}

const std::vector<mpq_class>& legendre_P_coeffs(int r) {
  if (r < 0) throw DomainError("legendre_P: negative degree");
  std::lock_guard<std::mutex> lock(poly_mutex);
  if (p_cache.empty()) {
    p_cache[0] = {mpq_class(1)};
    p_cache[1] = {mpq_class(0), mpq_class(1)};
  }
  extend_recurrence(p_cache, r);
  return p_cache.at(r);
}

const std::vector<mpq_class>& legendre_W_coeffs(int r) {
  if (r < 0) throw DomainError("legendre_Q: negative degree");
  std::lock_guard<std::mutex> lock(poly_mutex);
  if (w_cache.empty()) {
    w_cache[0] = {mpq_class(0)};  // W_{-1}
    w_cache[1] = {mpq_class(1)};  // W_0
  }
  extend_recurrence(w_cache, r);
  return w_cache.at(r);
}

mpq_class legendre_P(int r, const mpq_class& x) {
  const auto& c = legendre_P_coeffs(r);
  mpq_class acc(0);
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Real eval_poly(const std::vector<mpq_class>& coeffs, const Real& x) {
  Real acc(x.precision());
  for (size_t i = coeffs.size(); i-- > 0;) {
    acc *= x;
    mpfr_add_q(acc.raw(), acc.raw(), coeffs[i].get_mpq_t(), MPFR_RNDN);
  }
  return acc;
}

Real legendre_P(int r, const Real& x) { return eval_poly(legendre_P_coeffs(r), x); }

Real legendre_Q(int r, const Real& t, Precision prec) {
  if (r < 0) throw DomainError("legendre_Q: negative degree");
  if (t <= 1L) throw DomainError("legendre_Q: argument must exceed 1 (Green function singularity)");
  // P_r L ~ t^{r-1} while Q_r ~ t^{-r-1}: about 2 r log2(t) bits cancel.
  long loss = t > 2L ? 2L * r * (t.exponent2() + 1) : 0;
  if (loss > prec) {
    // Q_r(t) = sqrt(pi) r! / (Gamma(r+3/2) (2t)^{r+1}) 2F1((r+1)/2, (r+2)/2; r+3/2; 1/t^2)
    Precision wp = prec + 16;
    Real tt = t.with_precision(wp);
    Real z = Real(1L, wp) / (tt * tt);
    Real a = Real(mpq_class(r + 1, 2), wp), b = Real(mpq_class(r + 2, 2), wp);
    Real c = Real(mpq_class(2 * r + 3, 2), wp);
    Real f = gauss_2f1(a, b, c, z, wp);
    Real pref = sqrt(pi(wp)) * gamma(Real(long(r + 1), wp)) / gamma(c);
    Real v = pref * f / pow(tt * 2L, long(r + 1));
    return v.with_precision(prec);
  }
  Precision wp = prec + loss + guard_bits(r + 2);
  Real tt = t.with_precision(wp);
  Real u = Real(2L, wp) / (tt - 1L);
  Real half_log(wp);
  mpfr_log1p(half_log.raw(), u.raw(), MPFR_RNDN);
  half_log /= 2L;
  Real v = eval_poly(legendre_P_coeffs(r), tt) * half_log - eval_poly(legendre_W_coeffs(r), tt);
  return v.with_precision(prec);
}

Real gauss_2f1(const Real& a, const Real& b, const Real& c, const Real& z, Precision prec) {
  if (c <= 0L && round_to_integer(c) == c)
    throw DomainError("gauss_2f1: c is a non-positive integer");
  Real az = abs(z);
  Precision wp = prec + 32;
  if (az > 1L) throw DomainError("gauss_2f1: |z| > 1 outside the series domain");
  if (az == Real(1L, wp)) {
    Real excess = c - a - b;
    if (z.sign() < 0 || excess <= 0L)
      throw DomainError("gauss_2f1: divergent parameters on |z| = 1");
    // Gauss summation theorem.
    Real A = a.with_precision(wp), B = b.with_precision(wp), C = c.with_precision(wp);
    Real v = gamma(C) * gamma(C - A - B) / (gamma(C - A) * gamma(C - B));
    return v.with_precision(prec);
  }
  Real A = a.with_precision(wp), B = b.with_precision(wp), C = c.with_precision(wp);
  Real Z = z.with_precision(wp);
  Real term(1L, wp), sum(1L, wp);
  double spread = std::fabs(a.to_double()) + std::fabs(b.to_double()) + std::fabs(c.to_double()) + 1.0;
  double zabs = az.to_double();
  for (long n = 0;; ++n) {
    term *= (A + n) * (B + n) / ((C + n) * Real(n + 1, wp));
    term *= Z;
    sum += term;
    if (term.is_zero()) break;
    double nn = double(n + 1);
    if (nn < 2.0 * spread) continue;
    double rho = zabs * (1.0 + spread / nn) * (1.0 + spread / nn);
    if (rho >= 1.0) continue;
    // |tail| <= |term| * rho / (1 - rho)
    long tail_exp = term.exponent2() + long(std::ceil(std::log2(rho / (1.0 - rho)))) + 1;
    if (tail_exp < sum.exponent2() - long(prec) - guard_bits(n + 1)) break;
    if (n > 50000000) throw PrecisionError("gauss_2f1: series did not converge");
  }
  return sum.with_precision(prec);
}

namespace {

Real inc_gamma_series(const Real& s, const Real& x, Precision wp) {
  Real eps = pow2(-long(wp) - 8, wp);
  if (s.is_zero()) {
    // E1(x) = -gamma - log x - sum_{n>=1} (-x)^n / (n n!)
    Real term(1L, wp), acc(wp);
    for (long n = 1;; ++n) {
      term *= -x;
      term /= n;
      Real add = term / n;
      acc += add;
      if (abs(add) < eps && Real(n, wp) > x) break;
    }
    return -euler_gamma(wp) - log(x) - acc;
  }
  // Gamma(s) - x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n))
  Real term = Real(1L, wp) / s, acc = term;
  for (long n = 1;; ++n) {
    term *= x;
    term /= (s + n);
    acc += term;
    if (term < eps * acc && Real(n, wp) > x) break;
  }
  return gamma(s) - pow(x, s) * exp(-x) * acc;
}

Real inc_gamma_cf(const Real& s, const Real& x, Precision wp) {
  // Modified Lentz on the Legendre continued fraction.
  Real tiny = pow2(-long(wp) * 4, wp);
  Real eps = pow2(-long(wp) - 4, wp);
  Real b = x + 1L - s;
  Real c = Real(1L, wp) / tiny;
  Real d = Real(1L, wp) / b;
  Real h = d;
  for (long i = 1;; ++i) {
    Real an = -(Real(i, wp) * (Real(i, wp) - s));
    b += Real(2L, wp);
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = Real(1L, wp) / d;
    Real del = d * c;
    h *= del;
    if (abs(del - 1L) < eps) break;
    if (i > 100000000) throw PrecisionError("incomplete_gamma: continued fraction did not converge");
  }
  return exp(-x) * pow(x, s) * h;
}

}  // namespace

Real incomplete_gamma(const Real& s, const Real& x, Precision prec) {
  if (s < 0L) throw DomainError("incomplete_gamma: s must be non-negative");
  if (x <= 0L) throw DomainError("incomplete_gamma: x must be positive");
  double cutoff = s.to_double() + 1.0 + kIncGammaSwitch * double(prec);
  if (x.to_double() >= cutoff) {
    Precision wp = prec + 32;
    return inc_gamma_cf(s.with_precision(wp), x.with_precision(wp), wp).with_precision(prec);
  }
  // Cancellation in Gamma(s) - gamma(s,x) costs about x log2(e) bits.
  Precision wp = prec + 32 + Precision(std::ceil(1.4427 * x.to_double()));
  for (int attempt = 0; attempt < 6; ++attempt) {
    Real v = inc_gamma_series(s.with_precision(wp), x.with_precision(wp), wp);
    Real scale = s.is_zero() ? abs(log(x.with_precision(wp))) + 1L : gamma(s.with_precision(wp));
    long lost = scale.exponent2() - v.exponent2();
    if (v.sign() > 0 && lost + long(prec) + 16 < long(wp)) return v.with_precision(prec);
    wp += Precision(lost > 0 ? lost : 64) + 32;
  }
  throw PrecisionError("incomplete_gamma: cancellation could not be resolved");
}

Real bessel_k_half(int k, const Real& x) {
  if (k < 1) throw DomainError("bessel_k_half: order index must be >= 1");
  Precision p = x.precision();
  int n = k - 1;
  Real inv2x = Real(1L, p) / (x * 2L);
  Real acc(p), pw(1L, p);
  mpz_class num, den;
  for (int j = 0; j <= n; ++j) {
    mpz_class c;
    mpz_fac_ui(num.get_mpz_t(), n + j);
    mpz_fac_ui(den.get_mpz_t(), j);
    mpz_class d2;
    mpz_fac_ui(d2.get_mpz_t(), n - j);
    c = num / (den * d2);
    acc += Real(c, p) * pw;
    pw *= inv2x;
  }
  return sqrt(pi(p) / (x * 2L)) * exp(-x) * acc;
}

Real completed_zeta(long s, Precision prec) {
  if (s < 2) throw DomainError("completed_zeta: s must be >= 2");
  Real half_s(mpq_class(s, 2), prec);
  return pow(pi(prec), -half_s) * gamma(half_s) * zeta((unsigned long)s, prec);
}

mpq_class bernoulli(int n) {
  static std::mutex m;
  static std::vector<mpq_class> cache;
  std::lock_guard<std::mutex> lock(m);
  if (n < 0) throw DomainError("bernoulli: negative index");
  while ((int)cache.size() <= n) {
    // Akiyama-Tanigawa, B_1 = +1/2 convention, fixed below.
    int target = (int)cache.size();
    std::vector<mpq_class> a(target + 1);
    for (int mm = 0; mm <= target; ++mm) {
      a[mm] = mpq_class(1, mm + 1);
      for (int j = mm; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
    }
    cache.push_back(a[0]);
  }
  mpq_class b = cache[n];
  if (n == 1) b = -b;
  return b;
}

mpz_class divisor_sigma(long n, unsigned k) {
  mpz_class acc(0), pw;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)d, k);
    acc += pw;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)e, k);
      acc += pw;
    }
  }
  return acc;
}

}  // namespace greencm::special
