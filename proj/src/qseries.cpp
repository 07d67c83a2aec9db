#include "greencm/qseries.hpp"
#include "greencm/errors.hpp"
#include "greencm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace greencm::qseries {

QExpansion::QExpansion(int weight, long n_min, long order, std::vector<mpq_class> coeffs)
    : weight_(weight), n_min_(n_min), N_(order), c_(std::move(coeffs)) {
  if (N_ < n_min_) N_ = n_min_;
  c_.resize(size_t(N_ - n_min_), mpq_class(0));
  normalize();
}

void QExpansion::normalize() {
  size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead == c_.size()) {
    // Keep the window anchored at n_min for an all-zero series.
    return;
  }
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + long(lead));
    n_min_ += long(lead);
  }
}

QExpansion QExpansion::zero(int weight, long order) { return QExpansion(weight, order, order, {}); }

QExpansion QExpansion::one(long order) {
  return QExpansion(0, 0, order, std::vector<mpq_class>{mpq_class(1)});
}

QExpansion QExpansion::monomial(int weight, long n, const mpq_class& c, long order) {
  if (n >= order) return zero(weight, order);
  return QExpansion(weight, n, order, std::vector<mpq_class>{c});
}

long QExpansion::valuation() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return n_min_ + long(i);
  return N_;
}

mpq_class QExpansion::coeff(long n) const {
  if (n >= N_) throw TruncationError("coefficient q^" + std::to_string(n) + " beyond truncation order", n + 1);
  if (n < n_min_) return mpq_class(0);
  return c_[size_t(n - n_min_)];
}

QExpansion QExpansion::operator+(const QExpansion& o) const {
  if (weight_ != o.weight_) throw DomainError("adding q-expansions of different weights");
  long N = std::min(N_, o.N_);
  long lo = std::min(n_min_, o.n_min_);
  if (lo > N) lo = N;
  std::vector<mpq_class> r(size_t(N - lo), mpq_class(0));
  for (long n = std::max(n_min_, lo); n < std::min(N, N_); ++n) r[size_t(n - lo)] += c_[size_t(n - n_min_)];
  for (long n = std::max(o.n_min_, lo); n < std::min(N, o.N_); ++n) r[size_t(n - lo)] += o.c_[size_t(n - o.n_min_)];
  return QExpansion(weight_, lo, N, std::move(r));
}

QExpansion QExpansion::operator-() const { return *this * mpq_class(-1); }

QExpansion QExpansion::operator-(const QExpansion& o) const { return *this + (-o); }

QExpansion QExpansion::operator*(const mpq_class& s) const {
  std::vector<mpq_class> r = c_;
  for (auto& v : r) v *= s;
  return QExpansion(weight_, n_min_, N_, std::move(r));
}

namespace {

mpz_class common_denominator(const std::vector<mpq_class>& c) {
  mpz_class l(1);
  for (const auto& v : c)
    if (v.get_den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace

QExpansion QExpansion::operator*(const QExpansion& o) const {
  long va = valuation(), vb = o.valuation();
  long N = std::min(N_ + vb, o.N_ + va);
  int w = weight_ + o.weight_;
  if (va >= N_ || vb >= o.N_) {
    // One factor is zero to its known order.
    return zero(w, N);
  }
  long lo = va + vb;
  if (N <= lo) return zero(w, N);
  // Integer convolution after clearing denominators.
  mpz_class da = common_denominator(c_), db = common_denominator(o.c_);
  std::vector<mpz_class> A, B;
  for (long n = va; n < N - vb && n < N_; ++n) A.push_back(mpz_class(c_[size_t(n - n_min_)] * da));
  for (long n = vb; n < N - va && n < o.N_; ++n) B.push_back(mpz_class(o.c_[size_t(n - o.n_min_)] * db));
  size_t len = size_t(N - lo);
  std::vector<mpz_class> R(len);
  for (size_t i = 0; i < A.size(); ++i) {
    if (A[i] == 0) continue;
    size_t jmax = std::min(B.size(), len - i);
    for (size_t j = 0; j < jmax; ++j) mpz_addmul(R[i + j].get_mpz_t(), A[i].get_mpz_t(), B[j].get_mpz_t());
  }
  mpz_class den = da * db;
  std::vector<mpq_class> r(len);
  for (size_t i = 0; i < len; ++i) {
    r[i] = mpq_class(R[i], den);
    r[i].canonicalize();
  }
  return QExpansion(w, lo, N, std::move(r));
}

QExpansion QExpansion::inverse() const {
  long v = valuation();
  if (v >= N_) throw DomainError("inverting a q-expansion with no known nonzero coefficient");
  long N = N_ - 2 * v;
  long len = N + v;  // exponents -v .. N-1
  std::vector<mpq_class> a(size_t(std::max(len, 0L)));
  for (long i = 0; i < len; ++i) a[size_t(i)] = coeff(v + i);
  std::vector<mpq_class> r(a.size());
  if (!r.empty()) {
    mpq_class inv0 = 1 / a[0];
    r[0] = inv0;
    for (size_t m = 1; m < r.size(); ++m) {
      mpq_class s(0);
      for (size_t i = 1; i <= m; ++i)
        if (a[i] != 0) s += a[i] * r[m - i];
      r[m] = -s * inv0;
    }
  }
  return QExpansion(-weight_, -v, N, std::move(r));
}

QExpansion QExpansion::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return one(N_);
  QExpansion result, base = *this;
  bool first = true;
  while (e > 0) {
    if (e & 1) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

QExpansion QExpansion::shift(long k) const { return QExpansion(weight_, n_min_ + k, N_ + k, c_); }

QExpansion QExpansion::truncate(long order) const {
  if (order > N_) throw TruncationError("cannot extend a q-expansion beyond its order", order);
  std::vector<mpq_class> r;
  for (long n = n_min_; n < order; ++n) r.push_back(c_[size_t(n - n_min_)]);
  return QExpansion(weight_, std::min(n_min_, order), order, std::move(r));
}

QExpansion QExpansion::derivative() const {
  std::vector<mpq_class> r = c_;
  for (size_t i = 0; i < r.size(); ++i) r[i] *= (n_min_ + long(i));
  return QExpansion(weight_ + 2, n_min_, N_, std::move(r));
}

QExpansion QExpansion::with_weight(int weight) const {
  QExpansion r = *this;
  r.weight_ = weight;
  return r;
}

bool QExpansion::agrees_with(const QExpansion& o) const {
  long N = std::min(N_, o.N_);
  long lo = std::min(n_min_, o.n_min_);
  for (long n = lo; n < N; ++n)
    if (coeff(n) != o.coeff(n)) return false;
  return true;
}

bool QExpansion::is_integral() const {
  for (const auto& v : c_)
    if (v.get_den() != 1) return false;
  return true;
}

std::vector<std::pair<long, mpq_class>> QExpansion::principal_part() const {
  std::vector<std::pair<long, mpq_class>> r;
  for (long n = n_min_; n < 0 && n < N_; ++n)
    if (c_[size_t(n - n_min_)] != 0) r.emplace_back(n, c_[size_t(n - n_min_)]);
  return r;
}

QExpansion eisenstein(int k, long order) {
  if (k < 4 || k % 2) throw DomainError("eisenstein: weight must be even and >= 4");
  mpq_class factor = mpq_class(-2 * k) / special::bernoulli(k);
  std::vector<mpq_class> c(size_t(std::max(order, 1L)));
  c[0] = 1;
  for (long n = 1; n < order; ++n) c[size_t(n)] = factor * mpq_class(special::divisor_sigma(n, unsigned(k - 1)));
  return QExpansion(k, 0, order, std::move(c));
}

namespace {

std::mutex cache_mutex;
std::map<int, QExpansion> form_cache;

QExpansion compute_standard(StandardForm name, long order) {
  switch (name) {
    case StandardForm::E4: return eisenstein(4, order);
    case StandardForm::E6: return eisenstein(6, order);
    case StandardForm::Delta: {
      QExpansion e4 = eisenstein(4, order), e6 = eisenstein(6, order);
      return ((e4 * e4 * e4) - (e6 * e6)) * mpq_class(1, 1728);
    }
    case StandardForm::J: {
      QExpansion e4 = eisenstein(4, order + 2);
      QExpansion delta = standard_form(StandardForm::Delta, order + 2);
      return ((e4 * e4 * e4) * delta.inverse()).truncate(order);
    }
  }
  throw DomainError("unknown standard form");
}

}  // namespace

QExpansion standard_form(StandardForm name, long order) {
  if (order < 1) throw DomainError("standard_form: order must be >= 1");
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = form_cache.find(int(name));
    if (it != form_cache.end() && it->second.order() >= order) return it->second.truncate(order);
  }
  QExpansion f = compute_standard(name, order);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = form_cache.find(int(name));
  if (it == form_cache.end() || it->second.order() < order) form_cache[int(name)] = f;
  return f;
}

StandardForm parse_standard_form(const std::string& name) {
  if (name == "E4") return StandardForm::E4;
  if (name == "E6") return StandardForm::E6;
  if (name == "Delta") return StandardForm::Delta;
  if (name == "J") return StandardForm::J;
  throw DomainError("unknown standard form: " + name);
}

namespace {

// E_{k'} for k' in {0, 4, 6, 8, 10, 14} as products of E4 and E6.
QExpansion small_eisenstein(int kp, long order) {
  QExpansion e4 = standard_form(StandardForm::E4, order), e6 = standard_form(StandardForm::E6, order);
  switch (kp) {
    case 0: return QExpansion::one(order);
    case 4: return e4;
    case 6: return e6;
    case 8: return e4 * e4;
    case 10: return e4 * e6;
    case 14: return e4 * e4 * e6;
  }
  throw DomainError("small_eisenstein: bad weight");
}

long dim_cusp_forms(int w) {
  if (w < 12 || w % 2) return 0;
  long d = w / 12 + ((w % 12) == 2 ? 0 : 1);
  return d - 1;
}

}  // namespace

QExpansion weakly_holomorphic_basis(int k, long m, long order) {
  if (k > 0 || k % 2) throw DomainError("weakly_holomorphic_basis: weight must be even and <= 0");
  if (m < 0) throw DomainError("weakly_holomorphic_basis: index must be >= 0");
  if (order < 1) throw DomainError("weakly_holomorphic_basis: order must be >= 1");
  int kp = ((k % 12) + 12) % 12;
  if (kp == 2) kp = 14;
  long l = (k - kp) / 12;  // <= 0
  long m0 = -l;
  if (m < m0 || (m == 0 && l < 0)) {
    throw UnavailableError("no form q^{-" + std::to_string(m) + "} + O(q^" + std::to_string(l + 1) +
                           ") in M^!_" + std::to_string(k) + ": obstructed by S_" + std::to_string(2 - k) +
                           " (dimension " + std::to_string(dim_cusp_forms(2 - k)) + ")");
  }
  long M = order + 4 * (m + m0) + 8;
  QExpansion delta = standard_form(StandardForm::Delta, M);
  QExpansion base = small_eisenstein(kp, M);
  if (l < 0) base = base * delta.inverse().pow(-l);
  base = base.with_weight(k);
  std::vector<QExpansion> basis{base};  // basis[i] = f_{k, m0 + i}
  QExpansion j = standard_form(StandardForm::J, M);
  for (long mm = m0 + 1; mm <= m; ++mm) {
    QExpansion g = (basis.back() * j).with_weight(k);
    for (long n = -mm + 1; n <= l; ++n) {
      mpq_class c = g.coeff(n);
      if (c != 0) g = g - basis[size_t(-n - m0)] * c;
    }
    basis.push_back(g);
  }
  QExpansion f = basis.back();
  if (f.order() < order) throw TruncationError("internal headroom exhausted", order);
  return f.truncate(order);
}

namespace {

double log2_abs(const mpq_class& q) {
  if (q == 0) return -1e300;
  long en, ed;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log2(std::fabs(mn)) + double(en) - std::log2(md) - double(ed);
}

Complex sum_series(const QExpansion& f, const Complex& tau, int dpow, Precision wp) {
  Complex q = e2pi(Complex(tau.re.with_precision(wp), tau.im.with_precision(wp)));
  Complex acc(wp);
  // Horner in q from the top exponent down, then multiply by q^{n_min}.
  const auto& c = f.raw();
  for (size_t i = c.size(); i-- > 0;) {
    acc = acc * q;
    if (c[i] == 0) continue;
    mpq_class v = c[i];
    if (dpow > 0) {
      mpz_class nn(f.n_min() + long(i));
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), nn.get_mpz_t(), unsigned(dpow));
      v *= p;
    }
    mpfr_add_q(acc.re.raw(), acc.re.raw(), v.get_mpq_t(), MPFR_RNDN);
  }
  return acc * pow(q, f.n_min());
}

}  // namespace

Complex evaluate_derivative(const QExpansion& f, const Complex& tau, int i, Precision prec) {
  if (!(tau.im > 0L)) throw DomainError("evaluate: tau must lie in the upper half-plane");
  Complex v = sum_series(f, tau, i, prec + 32);
  return Complex(v.re.with_precision(prec), v.im.with_precision(prec));
}

Complex evaluate_at(const QExpansion& f, const Complex& tau, Precision prec, Real* tail) {
  if (!(tau.im > 0L)) throw DomainError("evaluate_at: tau must lie in the upper half-plane");
  Precision wp = prec + special::guard_bits(long(f.raw().size()) + 1) + 16;
  Complex v = sum_series(f, tau, 0, wp);
  // Geometric tail model from the last two coefficients.
  double log2q = -2.0 * M_PI * tau.im.to_double() / std::log(2.0);
  long N = f.order();
  double lc = f.raw().empty() ? -1e300 : log2_abs(f.coeff(N - 1));
  double lc2 = (N - 2 >= f.n_min() && !f.raw().empty()) ? log2_abs(f.coeff(N - 2)) : -1e300;
  double growth = (lc > -1e299 && lc2 > -1e299) ? std::max(0.0, lc - lc2) : 0.0;
  // Holomorphic forms have slowly growing coefficients; allow for an extra factor.
  double ratio = log2q + growth;
  double mag = std::max(lc, std::max(lc2, 0.0));
  double log2_tail = mag + log2q * double(N) + growth - std::log2(1.0 - std::exp2(std::min(ratio, -1e-9)));
  double log2_val = v.abs().is_zero() ? -double(prec) : double(v.abs().exponent2());
  double target = std::max(log2_val, 0.0) - double(prec);
  if (ratio >= 0.0 || log2_tail > target) {
    long extra = ratio >= 0.0 ? N : long(std::ceil((log2_tail - target) / -ratio)) + 2;
    throw TruncationError("q-expansion order " + std::to_string(N) + " too small at this point", N + extra);
  }
  if (tail) *tail = pow2(long(std::ceil(log2_tail)), prec);
  return Complex(v.re.with_precision(prec), v.im.with_precision(prec));
}

QExpansion j_polynomial_expansion(const Poly& p, long order) {
  int d = std::max(p.degree(), 0);
  QExpansion j = standard_form(StandardForm::J, order + 2 * d + 2);
  QExpansion acc = QExpansion::zero(0, order + 2 * d + 2);
  QExpansion jp = QExpansion::one(order + 2 * d + 2);
  for (int i = 0; i <= p.degree(); ++i) {
    if (p.coeff(i) != 0) acc = acc + jp * p.coeff(i);
    if (i < p.degree()) jp = jp * j;
  }
  return acc.truncate(std::min(order, acc.order()));
}

Poly as_j_polynomial(const QExpansion& f) {
  if (f.weight() != 0) throw DomainError("as_j_polynomial: weight must be 0");
  long v = f.valuation();
  long d = v < 0 ? -v : 0;
  long N = f.order();
  if (N <= 0) throw TruncationError("as_j_polynomial: need coefficients through q^0", 1);
  QExpansion j = standard_form(StandardForm::J, N + d + 2);
  std::vector<QExpansion> powers{QExpansion::one(N + d + 2)};
  for (long i = 1; i <= d; ++i) powers.push_back(powers.back() * j);
  QExpansion r = f;
  std::vector<mpq_class> coeffs(size_t(d + 1), mpq_class(0));
  for (long i = d; i >= 0; --i) {
    mpq_class c = r.coeff(-i);
    coeffs[size_t(i)] = c;
    if (c != 0) r = r - powers[size_t(i)] * c;
  }
  for (long n = r.n_min(); n < r.order(); ++n)
    if (r.coeff(n) != 0)
      throw DomainError("as_j_polynomial: residual coefficient at q^" + std::to_string(n) + ", input not in Q[j]");
  return Poly(std::move(coeffs));
}

std::string rational_to_string(const mpq_class& value) {
  mpq_class q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str() + "/1";
  return q.get_str();
}

mpq_class rational_from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw DomainError("malformed rational: " + s);
  q.canonicalize();
  return q;
}

nlohmann::json to_json(const QExpansion& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (long n = f.n_min(); n < f.order(); ++n) {
    mpq_class c = f.coeff(n);
    if (c != 0) coeffs.push_back({n, rational_to_string(c)});
  }
  return {{"weight", f.weight()}, {"n_min", f.n_min()}, {"N", f.order()}, {"coeffs", coeffs}};
}

QExpansion qexpansion_from_json(const nlohmann::json& j) {
  int w = j.at("weight").get<int>();
  long n_min = j.at("n_min").get<long>();
  long N = j.at("N").get<long>();
  std::vector<mpq_class> c(size_t(std::max(0L, N - n_min)), mpq_class(0));
  for (const auto& e : j.at("coeffs")) {
    long n = e.at(0).get<long>();
    if (n < n_min || n >= N) throw DomainError("q-expansion JSON: exponent outside [n_min, N)");
    c[size_t(n - n_min)] = rational_from_string(e.at(1).get<std::string>());
  }
  return QExpansion(w, n_min, N, std::move(c));
}

}  // namespace greencm::qseries
