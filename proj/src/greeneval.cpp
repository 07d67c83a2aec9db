#include "greencm/greeneval.hpp"
#include "greencm/errors.hpp"
#include "greencm/special_functions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

namespace greencm::green {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long ext_gcd(long a, long b, long& u, long& v) {
  long u0 = 1, v0 = 0, u1 = 0, v1 = 1;
  while (b != 0) {
    long q = floor_div(a, b);
    long t = a - q * b;
    a = b;
    b = t;
    t = u0 - q * u1; u0 = u1; u1 = t;
    t = v0 - q * v1; v0 = v1; v1 = t;
  }
  if (a < 0) {
    a = -a;
    u0 = -u0;
    v0 = -v0;
  }
  u = u0;
  v = v0;
  return a;
}

// Range of k with |x0 + k*step| <= B; empty when lo > hi.
void k_range(long x0, long step, long B, long& lo, long& hi) {
  if (step == 0) {
    if (std::labs(x0) <= B) {
      lo = -(1L << 40);
      hi = 1L << 40;
    } else {
      lo = 1;
      hi = 0;
    }
    return;
  }
  long a = -B - x0, b = B - x0;
  if (step > 0) {
    lo = ceil_div(a, step);
    hi = floor_div(b, step);
  } else {
    lo = ceil_div(b, step);
    hi = floor_div(a, step);
  }
}

struct PointData {
  Real x1, y1, x2, y2, pre, pim;  // P = z1 z2
};

PointData point_data(const Complex& z1, const Complex& z2, Precision wp) {
  PointData d{z1.re.with_precision(wp), z1.im.with_precision(wp), z2.re.with_precision(wp),
              z2.im.with_precision(wp), Real(wp), Real(wp)};
  d.pre = d.x1 * d.x2 - d.y1 * d.y2;
  d.pim = d.x1 * d.y2 + d.y1 * d.x2;
  return d;
}

// |c z1 z2 + d z1 - a z2 - b|^2
void abs2_pairing(const PointData& p, long a, long b, long c, long d, Real& re, Real& im, Real& out) {
  mpfr_mul_si(re.raw(), p.pre.raw(), c, MPFR_RNDN);
  mpfr_mul_si(im.raw(), p.pim.raw(), c, MPFR_RNDN);
  Real t(re.precision());
  mpfr_mul_si(t.raw(), p.x1.raw(), d, MPFR_RNDN);
  re += t;
  mpfr_mul_si(t.raw(), p.y1.raw(), d, MPFR_RNDN);
  im += t;
  mpfr_mul_si(t.raw(), p.x2.raw(), a, MPFR_RNDN);
  re -= t;
  mpfr_mul_si(t.raw(), p.y2.raw(), a, MPFR_RNDN);
  im -= t;
  mpfr_sub_si(re.raw(), re.raw(), b, MPFR_RNDN);
  mpfr_sqr(out.raw(), re.raw(), MPFR_RNDN);
  mpfr_sqr(t.raw(), im.raw(), MPFR_RNDN);
  out += t;
}

std::string matrix_string(long a, long b, long c, long d) {
  return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," + std::to_string(d) + "]]";
}

// Smallest eigenvalue of the majorant |A|^2 + |A'|^2 as a form in (a,b,c,d),
// A' being the pairing with z2 replaced by its conjugate.
double majorant_min_eigenvalue(const Complex& z1, const Complex& z2) {
  std::complex<double> w1(z1.re.to_double(), z1.im.to_double()), w2(z2.re.to_double(), z2.im.to_double());
  std::complex<double> v[4] = {-w2, -1.0, w1 * w2, w1};
  std::complex<double> vc[4] = {-std::conj(w2), -1.0, w1 * std::conj(w2), w1};
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = (v[i] * std::conj(v[j])).real() + (vc[i] * std::conj(vc[j])).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M);
  return es.eigenvalues()(0);
}

// Omitted-term estimate for sum Q_{s-1}(t) over det-m matrices outside the
// entry box of size B: the hyperbolic count N(T) ~ 12 sigma(m) T with
// Q_{s-1}(t) ~ sqrt(pi) Gamma(s) / (Gamma(s+1/2) (2t)^s), integrated from the
// smallest t reachable outside the box.
Real lattice_tail(const Complex& z1, const Complex& z2, int s, long m, long B, Precision prec) {
  double lam = majorant_min_eigenvalue(z1, z2);
  double y1 = z1.im.to_double(), y2 = z2.im.to_double();
  double TB = lam * double(B + 1) * double(B + 1) / (4.0 * double(m) * y1 * y2);
  if (TB <= 1.0) return Real(1e300, prec);
  double sigma = special::divisor_sigma(m, 1).get_d();
  double cs = std::sqrt(M_PI) * std::tgamma(double(s)) / std::tgamma(double(s) + 0.5);
  double tail = 12.0 * sigma * cs * std::pow(2.0, -s) * std::pow(TB, 1.0 - s) / (s - 1.0);
  return Real(tail, prec);
}

void check_upper(const Complex& z, const char* name) {
  if (!(z.im > 0L)) throw DomainError(std::string(name) + " must lie in the upper half-plane");
}

// Sum over SL2(Z) with |entries| <= B of Q_{s-1}(t).
Real lattice_sum_sl2(const Complex& z1, const Complex& z2, int s, long B, Precision prec, long& terms) {
  Precision wp = prec + special::guard_bits(16 * B * B + 16);
  PointData pd = point_data(z1, z2, wp);
  Real two_y1y2 = pd.y1 * pd.y2 * 2L;
  Real eps = pow2(-long(prec) / 4, wp);
  Real acc(wp), re(wp), im(wp), a2(wp);
  terms = 0;
  for (long c = -B; c <= B; ++c) {
    for (long d = -B; d <= B; ++d) {
      if (std::gcd(std::labs(c), std::labs(d)) != 1) continue;
      long u, v;
      ext_gcd(d, c, u, v);  // u d + v c = 1
      long a0 = u, b0 = -v;   // a0 d - b0 c = 1
      long lo1, hi1, lo2, hi2;
      k_range(a0, c, B, lo1, hi1);
      k_range(b0, d, B, lo2, hi2);
      long lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
      for (long k = lo; k <= hi; ++k) {
        long a = a0 + k * c, b = b0 + k * d;
        abs2_pairing(pd, a, b, c, d, re, im, a2);
        Real tm1 = a2 / two_y1y2;
        if (tm1 < eps)
          throw SingularityError("points are SL2(Z)-equivalent up to 2^-" + std::to_string(prec / 4) +
                                 " (gamma = " + matrix_string(a, b, c, d) + ")");
        acc += special::legendre_Q(s - 1, tm1 + 1L, wp);
        ++terms;
      }
    }
  }
  return acc.with_precision(prec);
}

GreenValue lattice_core_fixed(const Complex& z1, const Complex& z2, int s, long B, const GreenParams& params) {
  long terms = 0;
  Real sum = lattice_sum_sl2(z1, z2, s, B, params.prec, terms);
  GreenValue v{sum * -2L, lattice_tail(z1, z2, s, 1, B, params.prec) * 2L, terms, B, "lattice", params};
  return v;
}

GreenValue lattice_core(const Complex& z1, const Complex& z2, int s, const GreenParams& params) {
  if (params.B < 1) throw DomainError("enumeration bound B must be >= 1");
  if (params.tail_policy == TailPolicy::bound) return lattice_core_fixed(z1, z2, s, params.B, params);
  // Heuristic policy: double B until consecutive values agree.
  GreenValue prev = lattice_core_fixed(z1, z2, s, params.B, params);
  long total = prev.terms_summed;
  for (long B = params.B * 2; B <= params.max_B; B *= 2) {
    GreenValue cur = lattice_core_fixed(z1, z2, s, B, params);
    total += cur.terms_summed;
    Real diff = abs(cur.value - prev.value);
    // error ~ B^{2(1-s)}: remaining error after doubling is diff / (4^{s-1} - 1)
    cur.tail_estimate = diff / long((1L << (2 * (s - 1))) - 1);
    cur.terms_summed = total;
    if (diff <= ldexp(max(abs(cur.value), Real(1L, params.prec)), -long(params.prec)) || B * 2 > params.max_B)
      return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

Complex apply(const Mat2& g, const Complex& z) {
  Precision p = z.precision();
  Complex num(z.re * g.a + Real(g.b, p), z.im * g.a);
  Complex den(z.re * g.c + Real(g.d, p), z.im * g.c);
  return num / den;
}

Complex reduce_point(const Complex& zin, Mat2* gamma) {
  check_upper(zin, "point");
  Complex z = zin;
  Mat2 g;
  Real half = Real(1L, z.precision()) / 2L;
  for (int it = 0; it < 10000; ++it) {
    Real shift = round_to_integer(z.re);
    long n = to_mpz(shift).get_si();
    if (n != 0) {
      z.re -= Real(n, z.precision());
      g = Mat2{g.a - n * g.c, g.b - n * g.d, g.c, g.d};
    }
    if (z.norm() < 1L) {
      Real nr = z.norm();
      z = Complex(-z.re / nr, z.im / nr);
      g = Mat2{-g.c, -g.d, g.a, g.b};
      continue;
    }
    break;
  }
  if (gamma) *gamma = g;
  return z;
}

Real hyperbolic_t(const Complex& z1, const Complex& z2, const Mat2& g) {
  Precision wp = std::max(z1.precision(), z2.precision());
  PointData pd = point_data(z1, z2, wp);
  Real re(wp), im(wp), a2(wp);
  abs2_pairing(pd, g.a, g.b, g.c, g.d, re, im, a2);
  return a2 / (pd.y1 * pd.y2 * (2L * g.det())) + 1L;
}

Real projection_norm(const Complex& z1, const Complex& z2, const Mat2& lambda) {
  // Q = det with bilinear form (x, y) = x11 y22 + x22 y11 - x12 y21 - x21 y12,
  // Z = [[z1, -z1 z2], [1, -z2]], Q(lambda_{z perp}) = Q(lambda) + |(lambda, Z)|^2 / |(Z, Zbar)|.
  Precision wp = std::max(z1.precision(), z2.precision());
  Complex one(Real(1L, wp), Real(wp));
  Complex Z11 = z1, Z12 = -(z1 * z2), Z21 = one, Z22 = -z2;
  auto pair = [&](const Complex& x11, const Complex& x12, const Complex& x21, const Complex& x22,
                  const Complex& y11, const Complex& y12, const Complex& y21, const Complex& y22) {
    return x11 * y22 + x22 * y11 - x12 * y21 - x21 * y12;
  };
  auto R = [&](long v) { return Complex(Real(v, wp), Real(wp)); };
  Complex lz = pair(R(lambda.a), R(lambda.b), R(lambda.c), R(lambda.d), Z11, Z12, Z21, Z22);
  Complex zz = pair(Z11, Z12, Z21, Z22, Z11.conj(), Z12.conj(), Z21.conj(), Z22.conj());
  return Real(lambda.det(), wp) + lz.norm() / zz.abs();
}

GreenValue green_core(const Complex& z1, const Complex& z2, int s, const GreenParams& params) {
  check_upper(z1, "z1");
  check_upper(z2, "z2");
  if (s < 2) throw DomainError("s must be an integer >= 2");
  if (params.prec < 64) throw DomainError("precision must be >= 64 bits");
  if (params.method == Method::lattice) return lattice_core(z1, z2, s, params);
  if (params.method == Method::fourier) {
    GreenValue v = green_fourier(z1, z2, s, params.prec);
    v.params = params;
    return v;
  }
  if (fourier_supported(s)) {
    try {
      GreenValue v = green_fourier(z1, z2, s, params.prec);
      v.params = params;
      return v;
    } catch (const UnsupportedError&) {
      // fall through to the lattice sum
    }
  }
  return lattice_core(z1, z2, s, params);
}

namespace {

GreenValue hecke_on_second(const Complex& z1, const Complex& z2, int s, long m, const GreenParams& params) {
  Precision p = params.prec;
  GreenValue total{Real(p), Real(p), 0, 0, "", params};
  for (long a = 1; a <= m; ++a) {
    if (m % a) continue;
    long d = m / a;
    for (long b = 0; b < d; ++b) {
      Complex w = apply(Mat2{a, b, 0, d}, Complex(z2.re.with_precision(p + 32), z2.im.with_precision(p + 32)));
      GreenValue g;
      try {
        g = green_core(z1, w, s, params);
      } catch (const SingularityError& e) {
        throw SingularityError("Hecke translate (" + std::to_string(a) + " z + " + std::to_string(b) + ")/" +
                               std::to_string(d) + ": " + e.what());
      }
      total.value += g.value;
      total.tail_estimate += g.tail_estimate;
      total.terms_summed += g.terms_summed;
      total.B_used = std::max(total.B_used, g.B_used);
      if (total.method.empty()) total.method = g.method;
      else if (total.method != g.method) total.method = "mixed";
    }
  }
  return total;
}

}  // namespace

GreenValue green_hecke(const Complex& z1, const Complex& z2, int s, long m, const GreenParams& params) {
  if (m < 1) throw DomainError("Hecke index m must be >= 1");
  GreenValue first = hecke_on_second(z1, z2, s, m, params);
  if (m == 1 || first.method == "fourier") return first;
  // T_m is self-adjoint: when a translate of z2 defeats the expansion, translate z1 instead.
  GreenValue other = hecke_on_second(z2, z1, s, m, params);
  other.terms_summed += first.terms_summed;
  return other.tail_estimate < first.tail_estimate ? other : first;
}

GreenValue green_f(const Complex& z1, const Complex& z2, int r, const qseries::QExpansion& f,
                   const GreenParams& params) {
  if (r < 1) throw DomainError("r must be >= 1");
  if (f.weight() != -2 * r) throw DomainError("f must have weight -2r = " + std::to_string(-2 * r));
  auto pp = f.principal_part();
  if (pp.empty()) throw DomainError("f has no principal part");
  Precision p = params.prec;
  GreenValue total{Real(p), Real(p), 0, 0, "", params};
  for (const auto& [n, c] : pp) {
    if (c.get_den() != 1) throw DomainError("principal part coefficients must be integral");
    long m = -n;
    GreenValue g;
    try {
      g = green_hecke(z1, z2, r + 1, m, params);
    } catch (const SingularityError& e) {
      throw SingularityError("m = " + std::to_string(m) + ": " + e.what());
    }
    mpz_class w = mpz_class(c.get_num()) * 1;
    mpz_class mr;
    mpz_ui_pow_ui(mr.get_mpz_t(), (unsigned long)m, (unsigned long)r);
    w *= mr;
    Real weight(w, p);
    total.value += g.value * weight;
    total.tail_estimate += g.tail_estimate * abs(weight);
    total.terms_summed += g.terms_summed;
    total.B_used = std::max(total.B_used, g.B_used);
    if (total.method.empty()) total.method = g.method;
    else if (total.method != g.method) total.method = "mixed";
  }
  return total;
}

namespace {

GreenValue phi_fixed(const Complex& z1, const Complex& z2, long m, int s, long B, const GreenParams& params) {
  Precision prec = params.prec;
  Precision wp = prec + special::guard_bits(16 * B * B + 16);
  Complex w1(z1.re.with_precision(wp), z1.im.with_precision(wp));
  Complex w2(z2.re.with_precision(wp), z2.im.with_precision(wp));
  Real S(long(s), wp), S2(long(2 * s), wp);
  Real mm(m, wp);
  Real eps = pow2(-long(prec) / 4, wp);
  Real acc(wp);
  long terms = 0;
  auto visit = [&](long a, long b, long c, long d) {
    Real Q = projection_norm(w1, w2, Mat2{a, b, c, d});
    Real u = mm / Q;
    if (Real(1L, wp) - u < eps)
      throw SingularityError("lambda = " + matrix_string(a, b, c, d) + " lies on the divisor Z(" + std::to_string(m) + ")");
    acc += pow(u, S) * special::gauss_2f1(S, S, S2, u, wp);
    ++terms;
  };
  // Direct enumeration of det = m matrices inside the entry box.
  for (long a = -B; a <= B; ++a) {
    for (long b = -B; b <= B; ++b) {
      for (long c = -B; c <= B; ++c) {
        if (a != 0) {
          long num = m + b * c;
          if (num % a) continue;
          long d = num / a;
          if (std::labs(d) > B) continue;
          visit(a, b, c, d);
        } else if (-b * c == m) {
          for (long d = -B; d <= B; ++d) visit(a, b, c, d);
        }
      }
    }
  }
  Real pref = gamma(S) * 2L / gamma(S2);
  Real value = (acc * pref).with_precision(prec);
  Real tail = phi_tail_bound(z1, z2, m, s, B, prec);
  return GreenValue{value, tail, terms, B, "lattice-hypergeometric", params};
}

}  // namespace

Real phi_tail_bound(const Complex& z1, const Complex& z2, long m, int s, long B, Precision prec) {
  // Omitted terms: same count model as the lattice sum, scaled by 4/Gamma(s).
  return lattice_tail(z1, z2, s, m, B, prec) * 4L / gamma(Real(long(s), prec));
}

GreenValue phi_hypergeometric(const Complex& z1, const Complex& z2, long m, int s, const GreenParams& params) {
  check_upper(z1, "z1");
  check_upper(z2, "z2");
  if (m < 1) throw DomainError("m must be >= 1");
  if (s < 2) throw DomainError("s must exceed sigma_0 + 1 = 1");
  if (params.B < 1) throw DomainError("enumeration bound B must be >= 1");
  if (params.tail_policy == TailPolicy::bound) return phi_fixed(z1, z2, m, s, params.B, params);
  // Same doubling rule as the lattice sum: the omitted terms decay like B^{2(1-s)}.
  GreenValue prev = phi_fixed(z1, z2, m, s, params.B, params);
  long total = prev.terms_summed;
  for (long B = params.B * 2; B <= params.max_B; B *= 2) {
    GreenValue cur = phi_fixed(z1, z2, m, s, B, params);
    total += cur.terms_summed;
    Real diff = abs(cur.value - prev.value);
    cur.tail_estimate = diff / long((1L << (2 * (s - 1))) - 1);
    cur.terms_summed = total;
    if (diff <= ldexp(max(abs(cur.value), Real(1L, params.prec)), -long(params.prec)) || B * 2 > params.max_B)
      return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace greencm::green
