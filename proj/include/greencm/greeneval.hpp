#pragma once

#include "greencm/qseries.hpp"
#include "greencm/real.hpp"

#include <string>

namespace greencm::green {

enum class TailPolicy { heuristic, bound };

// lattice: entry-bounded sum over matrices. fourier: expansion in the upper
// point (integer s with S_{2s} = 0 only). automatic picks fourier when it
// applies and falls back to the lattice sum otherwise.
enum class Method { automatic, lattice, fourier };

struct GreenParams {
  Precision prec = 128;
  long B = 32;              // matrix-entry bound for lattice sums
  TailPolicy tail_policy = TailPolicy::bound;
  Method method = Method::automatic;
  long max_B = 1024;        // ceiling for the heuristic doubling policy
};

struct GreenValue {
  Real value;
  Real tail_estimate;
  long terms_summed = 0;
  long B_used = 0;          // 0 when no lattice sum was involved
  std::string method;
  GreenParams params;
};

struct Mat2 {
  long a = 1, b = 0, c = 0, d = 1;
  long det() const { return a * d - b * c; }
};

Complex apply(const Mat2& g, const Complex& z);
// Standard fundamental domain |x| <= 1/2, |z| >= 1; returns gamma with gamma z in it.
Complex reduce_point(const Complex& z, Mat2* gamma = nullptr);

// t = 1 + |z1 - g z2|^2 / (2 Im z1 Im g z2) for det g = m > 0.
Real hyperbolic_t(const Complex& z1, const Complex& z2, const Mat2& g);

GreenValue green_core(const Complex& z1, const Complex& z2, int s, const GreenParams& params);
GreenValue green_hecke(const Complex& z1, const Complex& z2, int s, long m, const GreenParams& params);
// sum_{m >= 1} c(-m) m^r G^m_{r+1}
GreenValue green_f(const Complex& z1, const Complex& z2, int r, const qseries::QExpansion& f,
                   const GreenParams& params);

// 2 Gamma(s)/Gamma(2s) sum_{det lambda = m} (m/Q)^s F(s, s, 2s; m/Q) over
// M_2(Z) with entries bounded by params.B (sigma_0 = 0 for M_2(Z)); the heuristic
// policy doubles B up to params.max_B as for the lattice sum.
GreenValue phi_hypergeometric(const Complex& z1, const Complex& z2, long m, int s, const GreenParams& params);
// Bound on the terms of the Phi sum outside the entry box of size B.
Real phi_tail_bound(const Complex& z1, const Complex& z2, long m, int s, long B, Precision prec);

// Projection norm Q(lambda_{z perp}) for lambda in M_2(Z) at z = Z(z1, z2).
Real projection_norm(const Complex& z1, const Complex& z2, const Mat2& lambda);

// Expansion-based evaluator of G_k for k in {2, 3, 4, 5, 7}. Throws
// UnsupportedError when k is outside that set or the points are too close in
// height for the expansion to converge at a reasonable length.
GreenValue green_fourier(const Complex& z1, const Complex& z2, int k, Precision prec);

// Real-analytic Eisenstein series E(z, s) = sum over Gamma_inf \ Gamma of Im(gamma z)^s for integer s >= 2.
Real eisenstein_real_analytic(const Complex& z, int s, Precision prec);

bool fourier_supported(int k);

}  // namespace greencm::green
