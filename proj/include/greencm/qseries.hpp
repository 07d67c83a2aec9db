#pragma once

#include "greencm/poly.hpp"
#include "greencm/real.hpp"

#include <gmpxx.h>
#include "json.hpp"

#include <string>
#include <vector>

namespace greencm::qseries {

// Truncated Laurent series sum_{n_min <= n < N} c(n) q^n with exact rational
// coefficients. Coefficients at exponents >= N are unknown.
class QExpansion {
 public:
  QExpansion() = default;
  QExpansion(int weight, long n_min, long order, std::vector<mpq_class> coeffs);

  static QExpansion zero(int weight, long order);
  static QExpansion one(long order);
  static QExpansion monomial(int weight, long n, const mpq_class& c, long order);

  int weight() const { return weight_; }
  long n_min() const { return n_min_; }
  long order() const { return N_; }  // truncation order N
  // First exponent with a nonzero coefficient; order() if none is known.
  long valuation() const;
  mpq_class coeff(long n) const;  // throws TruncationError for n >= N
  const std::vector<mpq_class>& raw() const { return c_; }

  QExpansion operator+(const QExpansion& o) const;
  QExpansion operator-(const QExpansion& o) const;
  QExpansion operator-() const;
  QExpansion operator*(const QExpansion& o) const;
  QExpansion operator*(const mpq_class& s) const;
  QExpansion inverse() const;
  QExpansion pow(long e) const;
  QExpansion shift(long k) const;   // times q^k
  QExpansion truncate(long order) const;
  QExpansion derivative() const;    // q d/dq, weight tag + 2
  QExpansion with_weight(int weight) const;

  // Exact equality of all coefficients below min(order(), o.order()).
  bool agrees_with(const QExpansion& o) const;
  bool is_integral() const;
  // Principal part: exponents < 0 with coefficients.
  std::vector<std::pair<long, mpq_class>> principal_part() const;

 private:
  void normalize();
  int weight_ = 0;
  long n_min_ = 0;
  long N_ = 0;
  std::vector<mpq_class> c_;  // c_[i] is the coefficient of q^{n_min + i}
};

enum class StandardForm { E4, E6, Delta, J };

QExpansion standard_form(StandardForm name, long order);
StandardForm parse_standard_form(const std::string& name);

// Holomorphic Eisenstein series E_k, k >= 4 even, normalized to constant term 1.
QExpansion eisenstein(int k, long order);

// f_{k,m} = q^{-m} + O(q^{l+1}) in M^!_k with l = (k - k')/12 (Duke-Jenkins basis).
QExpansion weakly_holomorphic_basis(int k, long m, long order);

// Sum c(n) q^n at tau. Throws TruncationError carrying a sufficient order when
// the estimated tail exceeds 2^{-prec} relative to the value.
Complex evaluate_at(const QExpansion& f, const Complex& tau, Precision prec, Real* tail = nullptr);

// D^i f (tau) with D = q d/dq, no tail check.
Complex evaluate_derivative(const QExpansion& f, const Complex& tau, int i, Precision prec);

// P with P(j) = f for weight 0 forms with poles only at infinity.
Poly as_j_polynomial(const QExpansion& f);

// P(j) as a q-expansion.
QExpansion j_polynomial_expansion(const Poly& p, long order);

nlohmann::json to_json(const QExpansion& f);
QExpansion qexpansion_from_json(const nlohmann::json& j);

std::string rational_to_string(const mpq_class& q);
mpq_class rational_from_string(const std::string& s);

}  // namespace greencm::qseries
