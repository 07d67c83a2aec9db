#pragma once

#include "greencm/real.hpp"

#include <gmpxx.h>
#include <vector>

namespace greencm::special {

// Guard bits added to every series: 16 + ceil(log2(term count)).
long guard_bits(long terms);

// Coefficients (low to high) of the Legendre polynomial P_r.
const std::vector<mpq_class>& legendre_P_coeffs(int r);

// Coefficients of W_{r-1} in Q_r(t) = P_r(t) * 1/2 log((t+1)/(t-1)) - W_{r-1}(t).
const std::vector<mpq_class>& legendre_W_coeffs(int r);

mpq_class legendre_P(int r, const mpq_class& x);
Real legendre_P(int r, const Real& x);

// Legendre function of the second kind for t > 1, closed form.
Real legendre_Q(int r, const Real& t, Precision prec);

// Gauss 2F1 on its series domain: |z| < 1, or z = 1 with c - a - b > 0.
Real gauss_2f1(const Real& a, const Real& b, const Real& c, const Real& z, Precision prec);

// Upper incomplete gamma function for s >= 0, x > 0.
Real incomplete_gamma(const Real& s, const Real& x, Precision prec);

// K_{k-1/2}(x) for integer k >= 1 (elementary closed form).
Real bessel_k_half(int k, const Real& x);

// Completed zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s) for integer s >= 2.
Real completed_zeta(long s, Precision prec);

// Bernoulli number B_n.
mpq_class bernoulli(int n);

// sum over d | n of d^k for k >= 0.
mpz_class divisor_sigma(long n, unsigned k);

// Evaluate a rational polynomial (low to high) at a real point.
Real eval_poly(const std::vector<mpq_class>& coeffs, const Real& x);

}  // namespace greencm::special
