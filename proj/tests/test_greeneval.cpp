#include "doctest.h"

#include "greencm/errors.hpp"
#include "greencm/greeneval.hpp"
#include "greencm/quadforms.hpp"
#include "greencm/special_functions.hpp"

#include <numeric>

using namespace greencm;
using namespace greencm::green;

namespace {

Complex pt(double x, double y, Precision p) { return Complex(Real(x, p), Real(y, p)); }

Complex rho(Precision p) { return Complex(Real(-1L, p) / 2L, sqrt(Real(3L, p)) / 2L); }

double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

// Direct sum of Q_{s-1}(t) over all det-m matrices with entries bounded by B.
Real direct_det_m(const Complex& z1, const Complex& z2, int s, long m, long B, Precision p) {
  Real acc(p);
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b)
      for (long c = -B; c <= B; ++c)
        for (long d = -B; d <= B; ++d) {
          if (a * d - b * c != m) continue;
          acc += special::legendre_Q(s - 1, hyperbolic_t(z1, z2, Mat2{a, b, c, d}), p);
        }
  return acc * -2L;
}

}  // namespace

TEST_SUITE("greeneval") {

TEST_CASE("reference values from an independent mpmath implementation") {
  Precision p = 200;
  Complex z1 = pt(0.1, 2.0, p), z2 = pt(0.3, 1.1, p);
  CHECK(rel(green_fourier(z1, z2, 2, p).value, Real(std::string("-11.687026364055021047389325083215"), p)) < 1e-30);
  CHECK(rel(green_fourier(z1, z2, 3, p).value, Real(std::string("-2.9040661266294856123218"), p)) < 1e-21);
  Complex i = pt(0, 1, p);
  quadforms::HeegnerPoint h6{quadforms::form_from_triple(1, 1, -23)};
  CHECK(rel(green_fourier(i, h6.z(p), 3, p).value,
            Real(std::string("-2.00078911268120238950613668914477811755"), p)) < 1e-37);
}

TEST_CASE("G_2(i, rho) closed form") {
  Precision p = 256;
  Real g = green_core(pt(0, 1, p), rho(p), 2, GreenParams{p}).value;
  Real closed = log(Real(2L, p) + sqrt(Real(3L, p))) * -48L / sqrt(Real(12L, p));
  CHECK(rel(g, closed) < 1e-70);
}

TEST_CASE("expansion and lattice sum agree within the lattice tail bound") {
  Complex z1 = pt(0.1, 2.0, 128), z2 = pt(0.3, 1.1, 128);
  for (int k : {2, 3, 5, 7}) {
    GreenParams lp{96, 24, TailPolicy::bound, Method::lattice};
    GreenValue lat = green_core(z1, z2, k, lp);
    GreenValue four = green_fourier(z1, z2, k, 128);
    CAPTURE(k);
    CHECK(abs(lat.value - four.value) <= lat.tail_estimate);
    CHECK(four.tail_estimate < pow2(-100, 64));
  }
}

TEST_CASE("heuristic doubling policy") {
  Complex z1 = pt(0.1, 2.0, 96), z2 = pt(0.3, 1.1, 96);
  GreenParams hp{96, 8, TailPolicy::heuristic, Method::lattice, 64};
  GreenValue v = green_core(z1, z2, 7, hp);
  GreenValue ref = green_fourier(z1, z2, 7, 128);
  CHECK(v.B_used > 8);
  CHECK(v.B_used <= 64);
  CHECK(abs(v.value - ref.value).to_double() < 1e-12);
}

TEST_CASE("symmetry and modular invariance") {
  Precision p = 160;
  Complex z1 = pt(0.27, 0.93, p), z2 = pt(-0.41, 1.7, p);
  Real g = green_core(z1, z2, 4, GreenParams{p}).value;
  CHECK(rel(green_core(z2, z1, 4, GreenParams{p}).value, g) < 1e-40);
  Complex w1 = apply(Mat2{2, 1, 1, 1}, z1);
  Complex w2 = apply(Mat2{1, -3, 0, 1}, apply(Mat2{0, -1, 1, 0}, z2));
  CHECK(rel(green_core(w1, w2, 4, GreenParams{p}).value, g) < 1e-40);
}

TEST_CASE("point reduction") {
  Precision p = 128;
  Mat2 g;
  Complex z = pt(3.3, 0.05, p);
  Complex r = reduce_point(z, &g);
  CHECK(g.det() == 1);
  CHECK(abs(r.re).to_double() <= 0.5);
  CHECK(r.norm().to_double() >= 1.0 - 1e-30);
  Complex back = apply(g, z);
  CHECK(abs(back.re - r.re).to_double() < 1e-30);
  CHECK(abs(back.im - r.im).to_double() < 1e-30);
}

TEST_CASE("hecke coset sum matches the direct det-m enumeration") {
  Precision p = 96;
  Complex z1 = pt(0.1, 2.6, p), z2 = pt(0.3, 1.0, p);
  for (long m : {2, 3, 4}) {
    CAPTURE(m);
    Real direct = direct_det_m(z1, z2, 7, m, 16, p);
    GreenValue coset = green_hecke(z1, z2, 7, m, GreenParams{p});
    CHECK(rel(coset.value, direct) < 1e-7);
  }
}

TEST_CASE("green_f weights the Hecke translates by c(-m) m^r") {
  Precision p = 128;
  Complex z1 = pt(0.1, 2.6, p), z2 = pt(0.3, 1.0, p);
  // f = q^{-2} + 3 q^{-1} of weight -2 (only the principal part matters).
  qseries::QExpansion f(-2, -2, 0, {mpq_class(1), mpq_class(3)});
  GreenParams gp{p};
  Real expect = green_hecke(z1, z2, 2, 2, gp).value * 2L + green_hecke(z1, z2, 2, 1, gp).value * 3L;
  CHECK(rel(green_f(z1, z2, 1, f, gp).value, expect) < 1e-35);
  qseries::QExpansion bad(-2, -1, 0, {mpq_class(1, 2)});
  CHECK_THROWS_AS(green_f(z1, z2, 1, bad, gp), DomainError);
}

TEST_CASE("hyperbolic Laplacian eigenvalue") {
  Precision p = 320;
  Complex z1 = pt(0.21, 1.3, p), z2 = pt(-0.1, 2.9, p);
  for (int s : {2, 3}) {
    CAPTURE(s);
    Real h = pow2(-40, p);
    auto G = [&](const Real& dx, const Real& dy) {
      return green_fourier(Complex(z1.re + dx, z1.im + dy), z2, s, p).value;
    };
    Real zero(p);
    Real g0 = G(zero, zero);
    Real lap = (G(h, zero) + G(-h, zero) + G(zero, h) + G(zero, -h) - g0 * 4L) / (h * h);
    Real D = -(z1.im * z1.im) * lap;
    CHECK(std::abs((D / g0).to_double() + double(s * (s - 1))) < 1e-15);
  }
}

TEST_CASE("hypergeometric Phi equals -(2/r!) G^m_{r+1}") {
  Complex z1 = pt(0.1, 2.6, 96), z2 = pt(0.3, 1.0, 96);
  for (long m : {1, 2}) {
    CAPTURE(m);
    GreenParams pp{64, 12};
    GreenValue phi = phi_hypergeometric(z1, z2, m, 4, pp);
    Real g = green_hecke(z1, z2, 4, m, GreenParams{96}).value;
    Real expect = g * -2L / 6L;  // r = 3
    CHECK(abs(phi.value - expect) <= phi.tail_estimate);
  }
}

TEST_CASE("projection norm") {
  Precision p = 128;
  Complex z1 = pt(0.3, 1.4, p), z2 = pt(-0.2, 0.8, p);
  Mat2 g{2, 1, 3, 5};
  Real t = hyperbolic_t(z1, z2, g);
  Real Q = projection_norm(z1, z2, g);
  CHECK(abs(Q - (t + 1L) * long(g.det()) / 2L).to_double() < 1e-30);
  // Q(lambda_{z perp}) >= Q(lambda) with equality iff lambda is orthogonal to the negative plane.
  CHECK(Q >= Real(7L, p));
}

TEST_CASE("errors") {
  Precision p = 128;
  Complex i = pt(0, 1, p);
  GreenParams lp{p, 8, TailPolicy::bound, Method::lattice};
  CHECK_THROWS_AS(green_core(i, apply(Mat2{0, -1, 1, 0}, i), 2, lp), SingularityError);
  CHECK_THROWS_AS(green_core(i, pt(0.3, -1, p), 2, lp), DomainError);
  CHECK_THROWS_AS(green_core(i, rho(p), 1, lp), DomainError);
  CHECK_THROWS_AS(green_fourier(i, rho(p), 6, p), UnsupportedError);
  CHECK_THROWS_AS(green_fourier(i, pt(0.2, 1.0 + 1e-9, p), 2, p), UnsupportedError);
  CHECK_THROWS_AS(green_hecke(i, rho(p), 2, 0, lp), DomainError);
  // automatic falls back to the lattice sum when the heights nearly coincide
  GreenValue v = green_core(i, pt(0.2, 1.0 + 1e-9, p), 7, GreenParams{p, 8});
  CHECK(v.method == "lattice");
}

TEST_CASE("real-analytic Eisenstein series is invariant") {
  Precision p = 160;
  Complex z = pt(0.17, 1.2, p);
  Real e = eisenstein_real_analytic(z, 3, p);
  Complex w = apply(Mat2{1, 0, 1, 1}, z);  // Im w < 1; evaluated directly at a lower point
  CHECK(rel(eisenstein_real_analytic(w, 3, p), e) < 1e-40);
}

}  // TEST_SUITE
