#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace greencm {

// Dense polynomial over Q, coefficients stored low degree first. The zero
// polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<mpq_class> coeffs);
  static Poly constant(const mpq_class& c);
  static Poly x();

  int degree() const { return int(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  mpq_class coeff(int i) const;
  mpq_class leading() const;
  mpq_class operator()(const mpq_class& x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const mpq_class& s) const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }

  Poly monic() const;
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

// Quotient and remainder of a / b (b nonzero).
void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);

// Monic gcd g with s a + t b = g.
Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t);

}  // namespace greencm
