#include "greencm/errors.hpp"
#include "greencm/greeneval.hpp"
#include "greencm/qseries.hpp"
#include "greencm/special_functions.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace greencm::green {

namespace {

constexpr long kMaxFourierTerms = 6000;

struct CSeries {
  std::vector<Real> re, im;
  CSeries(long n, Precision p) : re(n, Real(p)), im(n, Real(p)) {}
  long size() const { return long(re.size()); }
};

// out[n] = sum_{i <= n} a[i] b[n - i] for n < N
CSeries mul(const CSeries& a, const CSeries& b, long N, Precision p) {
  CSeries out(N, p);
  Real t(p);
  for (long n = 0; n < N; ++n) {
    for (long i = 0; i <= n; ++i) {
      const Real &ar = a.re[i], &ai = a.im[i], &br = b.re[n - i], &bi = b.im[n - i];
      mpfr_fmms(t.raw(), ar.raw(), br.raw(), ai.raw(), bi.raw(), MPFR_RNDN);
      out.re[n] += t;
      mpfr_fmma(t.raw(), ar.raw(), bi.raw(), ai.raw(), br.raw(), MPFR_RNDN);
      out.im[n] += t;
    }
  }
  return out;
}

// Power-series inverse of v with v[0] = 1.
CSeries inverse(const CSeries& v, long N, Precision p) {
  CSeries u(N, p);
  u.re[0] = Real(1L, p);
  Real t(p), sr(p), si(p);
  for (long n = 1; n < N; ++n) {
    mpfr_set_zero(sr.raw(), 1);
    mpfr_set_zero(si.raw(), 1);
    for (long i = 1; i <= n; ++i) {
      const Real &vr = v.re[i], &vi = v.im[i], &ur = u.re[n - i], &ui = u.im[n - i];
      mpfr_fmms(t.raw(), vr.raw(), ur.raw(), vi.raw(), ui.raw(), MPFR_RNDN);
      sr += t;
      mpfr_fmma(t.raw(), vr.raw(), ui.raw(), vi.raw(), ur.raw(), MPFR_RNDN);
      si += t;
    }
    mpfr_neg(u.re[n].raw(), sr.raw(), MPFR_RNDN);
    mpfr_neg(u.im[n].raw(), si.raw(), MPFR_RNDN);
  }
  return u;
}

// Taylor coefficients in t = log q (D = q d/dq acts as d/dt) of f at tau,
// orders 0..K-1, using the exponents n < M.
std::vector<Complex> d_jet(const qseries::QExpansion& f, const Complex& tau, int K, long M, Precision p) {
  std::vector<Complex> jet(K, Complex(p));
  Complex q = e2pi(tau);
  Complex qn = pow(q, f.n_min());
  long top = std::min(M, f.order());
  std::vector<Real> fact(K, Real(1L, p));
  for (int i = 1; i < K; ++i) fact[i] = fact[i - 1] * long(i);
  for (long n = f.n_min(); n < top; ++n) {
    const mpq_class& c = f.raw()[n - f.n_min()];
    if (c != 0) {
      Complex term = qn * Real(c, p);
      Real np(1L, p);
      for (int i = 0; i < K; ++i) {
        jet[i] = jet[i] + term * (np / fact[i]);
        np *= n;
      }
    }
    qn = qn * q;
  }
  return jet;
}

// Number of q-exponents so that |c_n| n^K e^{-2 pi y n} with |c_n| <= e^{4 pi sqrt n}
// drops below 2^{-wp}.
long jet_length(double y, long wp, int K) {
  double target = -double(wp) * std::log(2.0) - 30.0;
  for (long M = 20;; M += 5) {
    double lg = 4.0 * M_PI * std::sqrt(double(M)) - 2.0 * M_PI * y * M + K * std::log(double(M));
    if (lg < target) return M + 10;
  }
}

// P_{k-1}(t) = sum_{j<k} (k-1+j)! / (j! (k-1-j)!) t^j
Real bessel_poly(int k, const Real& t) {
  Precision p = t.precision();
  int n = k - 1;
  Real acc(p), pw(1L, p);
  for (int j = 0; j <= n; ++j) {
    mpz_class num, a, b;
    mpz_fac_ui(num.get_mpz_t(), n + j);
    mpz_fac_ui(a.get_mpz_t(), j);
    mpz_fac_ui(b.get_mpz_t(), n - j);
    acc += Real(mpz_class(num / (a * b)), p) * pw;
    pw *= t;
  }
  return acc;
}

// R^{k-1} applied to weight 2-2k, as integer coefficients of w^a D^j.
std::map<std::pair<int, int>, long> raising_table(int k) {
  std::map<std::pair<int, int>, long> cur{{{0, 0}, 1}};
  long kappa = 2 - 2 * k;
  for (int it = 0; it < k - 1; ++it) {
    std::map<std::pair<int, int>, long> nxt;
    for (const auto& [aj, c] : cur) {
      nxt[{aj.first + 1, aj.second}] += c * (kappa - aj.first);
      nxt[{aj.first, aj.second + 1}] += -c;
    }
    cur = std::move(nxt);
    kappa += 2;
  }
  return cur;
}

}  // namespace

bool fourier_supported(int k) { return k == 2 || k == 3 || k == 4 || k == 5 || k == 7; }

Real eisenstein_real_analytic(const Complex& z, int s, Precision prec) {
  if (s < 2) throw DomainError("eisenstein_real_analytic: s must be >= 2");
  if (!(z.im > 0L)) throw DomainError("eisenstein_real_analytic: z must lie in the upper half-plane");
  double yd = z.im.to_double();
  long nmax = long(double(prec + 40) * std::log(2.0) / (2.0 * M_PI * yd)) + 20;
  Precision wp = prec + special::guard_bits(nmax) + 16;
  Real x = z.re.with_precision(wp), y = z.im.with_precision(wp);
  Real xi2s = special::completed_zeta(2 * s, wp);
  Real value = pow(y, long(s)) + special::completed_zeta(2 * s - 1, wp) / xi2s * pow(y, long(1 - s));
  Real twopi = pi(wp) * 2L;
  Real acc(wp);
  Real sqy = sqrt(y);
  Real half(mpq_class(1, 2), wp);
  for (long n = 1; n <= nmax; ++n) {
    Real sig(special::divisor_sigma(n, 2 * s - 1), wp);
    Real nn(n, wp);
    Real term = sig * pow(nn, half - long(s)) * sqy * special::bessel_k_half(s, twopi * nn * y) * cos(twopi * nn * x);
    acc += term;
  }
  value += acc * 4L / xi2s;
  return value.with_precision(prec);
}

GreenValue green_fourier(const Complex& z1, const Complex& z2, int k, Precision prec) {
  if (!fourier_supported(k)) throw UnsupportedError("expansion evaluator supports k in {2, 3, 4, 5, 7}; got " + std::to_string(k));
  if (!(z1.im > 0L) || !(z2.im > 0L)) throw DomainError("points must lie in the upper half-plane");
  Precision pp = prec + 64;
  Complex r1 = reduce_point(Complex(z1.re.with_precision(pp), z1.im.with_precision(pp)));
  Complex r2 = reduce_point(Complex(z2.re.with_precision(pp), z2.im.with_precision(pp)));
  bool first_lower = r1.im < r2.im;
  Complex zl = first_lower ? r1 : r2;
  Complex zu_given = first_lower ? z2 : z1;
  Complex zu_reduced = first_lower ? r2 : r1;
  double yl = zl.im.to_double();
  double gap_red = zu_reduced.im.to_double() - yl;
  double gap_given = zu_given.im.to_double() - yl;
  Complex zu = gap_given >= 0.5 * gap_red ? Complex(zu_given.re.with_precision(pp), zu_given.im.with_precision(pp))
                                          : zu_reduced;
  double dy = zu.im.to_double() - yl;
  if (!(dy > 0.0)) throw UnsupportedError("points have equal reduced heights; expansion does not converge");

  long N = 0;
  Precision wp = prec + 64;
  for (int it = 0; it < 3; ++it) {
    N = long(std::ceil(double(wp) * std::log(2.0) / (2.0 * M_PI * dy))) + 20;
    if (N > kMaxFourierTerms)
      throw UnsupportedError("points too close in height for the expansion (" + std::to_string(N) + " terms needed)");
    wp = prec + 64 + 2 * long(std::ceil(std::log2(double(N))));
  }
  Complex l(zl.re.with_precision(wp), zl.im.with_precision(wp));
  Complex u(zu.re.with_precision(wp), zu.im.with_precision(wp));

  // Exact inputs: j, f_{2-2k,1}, E_{2k}.
  long M = jet_length(yl, wp, k);
  qseries::QExpansion J = qseries::standard_form(qseries::StandardForm::J, std::max(N + 2, M));
  qseries::QExpansion f1 = qseries::weakly_holomorphic_basis(2 - 2 * k, 1, M);
  qseries::QExpansion E = qseries::eisenstein(2 * k, N + 1);

  std::vector<Complex> jj = d_jet(J, l, k, M, wp);
  std::vector<Complex> fj = d_jet(f1, l, k, M, wp);
  Complex x = jj[0];

  // V(p) = p (j(p) - x), U = 1/V, A_l = E_{2k} U^{l+1}.
  CSeries V(N, wp), Es(N, wp);
  for (long n = 0; n < N; ++n) {
    V.re[n] = Real(J.coeff(n - 1), wp);
    Es.re[n] = Real(E.coeff(n), wp);
  }
  V.re[1] -= x.re;
  V.im[1] -= x.im;
  CSeries U = inverse(V, N, wp);
  std::vector<CSeries> A;
  A.push_back(mul(Es, U, N, wp));
  for (int li = 1; li < k; ++li) A.push_back(mul(A.back(), U, N, wp));

  // R^{k-1} f_n(zl) = sum_l A_l[n-1-l] H_l.
  Real wl = Real(1L, wp) / (pi(wp) * l.im * 4L);
  auto table = raising_table(k);
  std::vector<Complex> C(k, Complex(wp));
  {
    Real fact(1L, wp);
    for (int j = 0; j < k; ++j) {
      if (j > 0) fact *= long(j);
      Real s(wp);
      for (const auto& [aj, c] : table)
        if (aj.second == j) s += Real(c, wp) * pow(wl, long(aj.first));
      C[j] = Complex(s * fact, Real(wp));
    }
  }
  std::vector<Complex> Ei(k, Complex(wp));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) Ei[i] = Ei[i] + C[j] * fj[j - i];
  std::vector<Complex> delta = jj;
  delta[0] = Complex(wp);
  std::vector<Complex> H(k, Complex(wp));
  {
    std::vector<Complex> dp(k, Complex(wp));
    dp[0] = Complex(Real(1L, wp), Real(wp));
    for (int li = 0; li < k; ++li) {
      for (int i = 0; i < k; ++i) H[li] = H[li] + dp[i] * Ei[i];
      std::vector<Complex> nd(k, Complex(wp));
      for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k; ++j) nd[i + j] = nd[i + j] + dp[i] * delta[j];
      dp = std::move(nd);
    }
  }

  Complex qu = e2pi(u);
  Complex qn = qu;
  Real wu = Real(1L, wp) / (pi(wp) * u.im * 4L);
  Real sum(wp), last(wp), prev_last(wp);
  for (long n = 1; n < N; ++n) {
    Complex Sn(wp);
    for (int li = 0; li < k && li <= n - 1; ++li) {
      long idx = n - 1 - li;
      Complex a(A[li].re[idx], A[li].im[idx]);
      Sn = Sn + a * H[li];
    }
    Real nn(n, wp);
    Real fac = bessel_poly(k, wu / nn) / pow(nn, long(k));
    Complex t = qn * Sn;
    Real term = t.re * fac;
    sum += term;
    prev_last = last;
    last = t.abs() * fac;
    qn = qn * qu;
  }
  Real eis = eisenstein_real_analytic(l, k, wp);
  Real half(mpq_class(1, 2), wp);
  Real value = -(pi(wp) * 4L / (Real(long(k), wp) - half)) * pow(u.im, long(1 - k)) * eis - sum * 4L;

  // Geometric tail from the last term, plus a rounding allowance.
  Real rho = exp(-(pi(wp) * 2L) * Real(dy, wp));
  Real tail = last * 4L * rho / (Real(1L, wp) - rho);
  tail += ldexp(max(abs(value), Real(1L, wp)), -long(prec) - 4);
  GreenValue out{value.with_precision(prec), tail.with_precision(prec), N - 1, 0, "fourier", GreenParams{}};
  out.params.prec = prec;
  out.params.method = Method::fourier;
  return out;
}

}  // namespace greencm::green
