#include "greencm/poly.hpp"
#include "greencm/errors.hpp"

#include <sstream>

namespace greencm {

Poly::Poly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const mpq_class& c) { return Poly(std::vector<mpq_class>{c}); }

Poly Poly::x() { return Poly(std::vector<mpq_class>{mpq_class(0), mpq_class(1)}); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class Poly::coeff(int i) const {
  return (i >= 0 && i < int(c_.size())) ? c_[i] : mpq_class(0);
}

mpq_class Poly::leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }

mpq_class Poly::operator()(const mpq_class& x) const {
  mpq_class acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()), mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * mpq_class(-1); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<mpq_class> r(c_.size() + o.c_.size() - 1, mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(r));
}

Poly Poly::operator*(const mpq_class& s) const {
  std::vector<mpq_class> r = c_;
  for (auto& v : r) v *= s;
  return Poly(std::move(r));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * mpq_class(1 / leading());
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    mpq_class v = c_[i];
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    mpq_class a = abs(v);
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<mpq_class> rem = a.coeffs();
  int db = b.degree();
  std::vector<mpq_class> quo(a.degree() >= db ? a.degree() - db + 1 : 0, mpq_class(0));
  mpq_class lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i] == 0) continue;
    mpq_class f = rem[i] / lb;
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeffs()[j];
  }
  q = Poly(std::move(quo));
  r = Poly(std::move(rem));
}

Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t) {
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    Poly q, r;
    divmod(r0, r1, q, r);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = r1; r1 = r;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  if (r0.is_zero()) {
    s = Poly();
    t = Poly();
    return r0;
  }
  mpq_class inv = 1 / r0.leading();
  s = s0 * inv;
  t = t0 * inv;
  return r0 * inv;
}

}  // namespace greencm
