#pragma once

#include "greencm/qseries.hpp"
#include "greencm/real.hpp"

#include <gmpxx.h>

#include <functional>
#include <map>
#include <vector>

namespace greencm::rc {

// Term key for c * pi^{-p} * w^i * q^n with w = 1/(4 pi v) and rational n.
struct Key {
  int i = 0;
  int p = 0;
  mpq_class n;
  bool operator<(const Key& o) const {
    if (i != o.i) return i < o.i;
    if (p != o.p) return p < o.p;
    return n < o.n;
  }
  bool operator==(const Key& o) const { return i == o.i && p == o.p && n == o.n; }
};

// Finite sum of c * pi^{-p} w^i q^n, exact for exponents n < order.
class NearlyHoloSeries {
 public:
  NearlyHoloSeries() = default;
  NearlyHoloSeries(mpq_class weight, mpq_class order) : weight_(std::move(weight)), order_(std::move(order)) {}

  static NearlyHoloSeries from_qexpansion(const qseries::QExpansion& f);
  static NearlyHoloSeries monomial(const mpq_class& weight, int i, const mpq_class& n, const mpq_class& c,
                                   const mpq_class& order, int p = 0);

  const mpq_class& weight() const { return weight_; }
  const mpq_class& order() const { return order_; }
  int depth() const;  // largest w-power present; 0 for the zero series
  mpq_class valuation() const;
  const std::map<Key, mpq_class>& terms() const { return terms_; }
  mpq_class coeff(int i, const mpq_class& n, int p = 0) const;
  // Component g_i as (p, n) -> c.
  std::map<std::pair<int, mpq_class>, mpq_class> component(int i) const;

  void add_term(int i, int p, const mpq_class& n, const mpq_class& c);
  NearlyHoloSeries with_weight(const mpq_class& k) const;
  NearlyHoloSeries truncate(const mpq_class& order) const;

  NearlyHoloSeries operator+(const NearlyHoloSeries& o) const;
  NearlyHoloSeries operator-(const NearlyHoloSeries& o) const;
  NearlyHoloSeries operator*(const NearlyHoloSeries& o) const;
  // Scalar c * pi^{-p}.
  NearlyHoloSeries scaled(const mpq_class& c, int p = 0) const;

  bool is_zero() const { return terms_.empty(); }
  // Exact equality of all terms with exponent below the smaller order.
  bool agrees_with(const NearlyHoloSeries& o) const;

 private:
  mpq_class weight_;
  mpq_class order_;
  std::map<Key, mpq_class> terms_;
};

// Tilde-R applied r times, (2i d/dtau + k/v) / (4 pi) at the running weight.
NearlyHoloSeries raise(const NearlyHoloSeries& f, int r = 1);
// L = -2i v^2 d/dtaubar.
NearlyHoloSeries lower(const NearlyHoloSeries& f);
NearlyHoloSeries rc_bracket(const NearlyHoloSeries& f, const NearlyHoloSeries& g, int r);

Complex evaluate(const NearlyHoloSeries& f, const Complex& tau, Precision prec);

// Generalized binomial m(m-1)...(m-n+1)/n! for rational m.
mpq_class binom(const mpq_class& m, long n);

struct MKey {
  int w1 = 0;                  // power of w_1 = 1/(4 pi v_1)
  std::vector<mpq_class> alpha;
  bool operator<(const MKey& o) const {
    if (w1 != o.w1) return w1 < o.w1;
    return alpha < o.alpha;
  }
};

// Series in q_1, ..., q_d with rational exponent vectors, exact for total
// exponent alpha_1 + ... + alpha_d < order. Terms may carry a power of w_1.
class MultiSeries {
 public:
  MultiSeries() = default;
  MultiSeries(std::vector<mpq_class> weights, mpq_class order)
      : weights_(std::move(weights)), order_(std::move(order)) {}

  // f_1(tau_1) ... f_d(tau_d)
  static MultiSeries tensor(const std::vector<qseries::QExpansion>& factors);

  int d() const { return int(weights_.size()); }
  const std::vector<mpq_class>& weights() const { return weights_; }
  const mpq_class& order() const { return order_; }
  const std::map<MKey, mpq_class>& terms() const { return terms_; }
  mpq_class valuation() const;  // smallest total exponent
  bool is_holomorphic() const;
  void add_term(int w1, const std::vector<mpq_class>& alpha, const mpq_class& c);
  MultiSeries with_weights(std::vector<mpq_class> weights) const;

  MultiSeries operator+(const MultiSeries& o) const;
  MultiSeries operator-(const MultiSeries& o) const;
  MultiSeries operator*(const MultiSeries& o) const;
  MultiSeries scaled(const mpq_class& c) const;
  MultiSeries inverse() const;  // holomorphic, unique term of minimal total exponent
  MultiSeries pow(long e) const;
  // Restriction to the diagonal tau_1 = ... = tau_d, w_1 -> w.
  NearlyHoloSeries diagonal() const;

 private:
  std::vector<mpq_class> weights_;
  mpq_class order_;
  std::map<MKey, mpq_class> terms_;
};

// C^1_{kappa, r}: Rankin-Cohen bracket of variable 1 against the diagonal of
// variables 2..d. On monomials q^alpha it gives
// sum_s (-1)^s C(k_1+r-1, s) C(k_2+...+k_d+r-1, r-s) alpha_1^{r-s} (alpha-alpha_1)^s q^alpha.
NearlyHoloSeries c1_restrict(const MultiSeries& f, const std::vector<mpq_class>& kappa, int r);

// (g^{r+1})^Delta * C^1_{kappa, r}(f / g).
NearlyHoloSeries dc_operator(const MultiSeries& f, const MultiSeries& g, const std::vector<mpq_class>& kappa, int r);

// a_e for e in N_0^d with |e| = r.
std::map<std::vector<int>, mpq_class> dc_coefficients(const std::vector<mpq_class>& kappa, int r);

// (sum_e a_e g^{r+1} D^e (f/g))^Delta with D_j = q_j d/dq_j; f, g holomorphic.
NearlyHoloSeries dc_operator_expanded(const MultiSeries& f, const MultiSeries& g,
                                      const std::vector<mpq_class>& kappa, int r);

// c[r][a][j] with R^a_k f R^{r-a}_l g = sum_j c[r][a][j] R^{r-j}_{k+l+2j} [f, g]_j.
using RRCTable = std::vector<std::vector<std::vector<mpq_class>>>;
RRCTable rrc_coefficients(const mpq_class& k, const mpq_class& l, int r0);

}  // namespace greencm::rc
