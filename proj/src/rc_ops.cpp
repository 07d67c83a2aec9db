#include "greencm/rc_ops.hpp"
#include "greencm/errors.hpp"

#include <algorithm>

namespace greencm::rc {

namespace {

mpq_class min_q(const mpq_class& a, const mpq_class& b) { return a < b ? a : b; }

mpq_class qpow(const mpq_class& x, long e) {
  mpq_class r = 1;
  for (long i = 0; i < e; ++i) r *= x;
  return r;
}

mpq_class weight_sum(const std::vector<mpq_class>& v, size_t from = 0) {
  mpq_class s = 0;
  for (size_t i = from; i < v.size(); ++i) s += v[i];
  return s;
}

// A large order for intermediate monomials; results are truncated afterwards.
const mpq_class kUnbounded(1L << 40);

}  // namespace

mpq_class binom(const mpq_class& m, long n) {
  if (n < 0) return 0;
  mpq_class r = 1;
  for (long i = 0; i < n; ++i) {
    r *= m - i;
    r /= i + 1;
  }
  return r;
}

NearlyHoloSeries NearlyHoloSeries::from_qexpansion(const qseries::QExpansion& f) {
  NearlyHoloSeries s(mpq_class(f.weight()), mpq_class(f.order()));
  for (size_t j = 0; j < f.raw().size(); ++j)
    if (f.raw()[j] != 0) s.add_term(0, 0, mpq_class(f.n_min() + long(j)), f.raw()[j]);
  return s;
}

NearlyHoloSeries NearlyHoloSeries::monomial(const mpq_class& weight, int i, const mpq_class& n, const mpq_class& c,
                                            const mpq_class& order, int p) {
  NearlyHoloSeries s(weight, order);
  s.add_term(i, p, n, c);
  return s;
}

int NearlyHoloSeries::depth() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.i);
  return d;
}

mpq_class NearlyHoloSeries::valuation() const {
  if (terms_.empty()) return order_;
  mpq_class v = terms_.begin()->first.n;
  for (const auto& [k, c] : terms_) v = min_q(v, k.n);
  return v;
}

mpq_class NearlyHoloSeries::coeff(int i, const mpq_class& n, int p) const {
  if (n >= order_) throw TruncationError("coefficient beyond truncation order", 0);
  auto it = terms_.find(Key{i, p, n});
  return it == terms_.end() ? mpq_class(0) : it->second;
}

std::map<std::pair<int, mpq_class>, mpq_class> NearlyHoloSeries::component(int i) const {
  std::map<std::pair<int, mpq_class>, mpq_class> out;
  for (const auto& [k, c] : terms_)
    if (k.i == i) out[{k.p, k.n}] = c;
  return out;
}

void NearlyHoloSeries::add_term(int i, int p, const mpq_class& n, const mpq_class& c) {
  if (c == 0 || n >= order_) return;
  mpq_class cc = c;
  cc.canonicalize();
  auto [it, inserted] = terms_.emplace(Key{i, p, n}, cc);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

NearlyHoloSeries NearlyHoloSeries::with_weight(const mpq_class& k) const {
  NearlyHoloSeries s = *this;
  s.weight_ = k;
  return s;
}

NearlyHoloSeries NearlyHoloSeries::truncate(const mpq_class& order) const {
  NearlyHoloSeries s(weight_, min_q(order, order_));
  for (const auto& [k, c] : terms_) s.add_term(k.i, k.p, k.n, c);
  return s;
}

NearlyHoloSeries NearlyHoloSeries::operator+(const NearlyHoloSeries& o) const {
  if (weight_ != o.weight_) throw DomainError("adding nearly holomorphic series of different weights");
  NearlyHoloSeries s(weight_, min_q(order_, o.order_));
  for (const auto& [k, c] : terms_) s.add_term(k.i, k.p, k.n, c);
  for (const auto& [k, c] : o.terms_) s.add_term(k.i, k.p, k.n, c);
  return s;
}

NearlyHoloSeries NearlyHoloSeries::operator-(const NearlyHoloSeries& o) const { return *this + o.scaled(-1); }

NearlyHoloSeries NearlyHoloSeries::operator*(const NearlyHoloSeries& o) const {
  mpq_class order = min_q(order_ + o.valuation(), o.order_ + valuation());
  NearlyHoloSeries s(weight_ + o.weight_, order);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) s.add_term(a.i + b.i, a.p + b.p, a.n + b.n, ca * cb);
  return s;
}

NearlyHoloSeries NearlyHoloSeries::scaled(const mpq_class& c, int p) const {
  NearlyHoloSeries s(weight_, order_);
  for (const auto& [k, v] : terms_) s.add_term(k.i, k.p + p, k.n, v * c);
  return s;
}

bool NearlyHoloSeries::agrees_with(const NearlyHoloSeries& o) const {
  mpq_class order = min_q(order_, o.order_);
  return truncate(order).terms_ == o.truncate(order).terms_;
}

NearlyHoloSeries raise(const NearlyHoloSeries& f, int r) {
  NearlyHoloSeries cur = f;
  for (int it = 0; it < r; ++it) {
    const mpq_class& k = cur.weight();
    NearlyHoloSeries nxt(k + 2, cur.order());
    // R(w^i q^n) = (k - i) w^{i+1} q^n - n w^i q^n
    for (const auto& [key, c] : cur.terms()) {
      nxt.add_term(key.i + 1, key.p, key.n, c * (k - key.i));
      nxt.add_term(key.i, key.p, key.n, -c * key.n);
    }
    cur = std::move(nxt);
  }
  return cur;
}

NearlyHoloSeries lower(const NearlyHoloSeries& f) {
  NearlyHoloSeries out(f.weight() - 2, f.order());
  // L(w^i q^n) = -(i / (4 pi)) w^{i-1} q^n
  for (const auto& [key, c] : f.terms())
    if (key.i > 0) out.add_term(key.i - 1, key.p + 1, key.n, c * mpq_class(-key.i, 4));
  return out;
}

NearlyHoloSeries rc_bracket(const NearlyHoloSeries& f, const NearlyHoloSeries& g, int r) {
  if (r < 0) throw DomainError("rc_bracket: r must be >= 0");
  const mpq_class &k1 = f.weight(), &k2 = g.weight();
  NearlyHoloSeries out;
  bool first = true;
  for (int s = 0; s <= r; ++s) {
    mpq_class c = binom(k1 + r - 1, s) * binom(k2 + r - 1, r - s);
    if ((r - s) % 2) c = -c;
    NearlyHoloSeries term = (raise(f, r - s) * raise(g, s)).scaled(c);
    out = first ? term : out + term;
    first = false;
  }
  return out;
}

Complex evaluate(const NearlyHoloSeries& f, const Complex& tau, Precision prec) {
  if (!(tau.im > 0L)) throw DomainError("evaluate: tau must lie in the upper half-plane");
  Precision wp = prec + 32;
  Complex t(tau.re.with_precision(wp), tau.im.with_precision(wp));
  Real pi_ = pi(wp);
  Real w = Real(1L, wp) / (pi_ * t.im * 4L);
  Complex acc(wp);
  for (const auto& [key, c] : f.terms()) {
    Real n(key.n, wp);
    Complex e = exp(Complex(-(pi_ * 2L * n * t.im), pi_ * 2L * n * t.re));
    Real s = Real(c, wp) * pow(w, long(key.i)) / pow(pi_, long(key.p));
    acc = acc + e * s;
  }
  return Complex(acc.re.with_precision(prec), acc.im.with_precision(prec));
}

MultiSeries MultiSeries::tensor(const std::vector<qseries::QExpansion>& factors) {
  if (factors.empty()) throw DomainError("tensor: no factors");
  std::vector<mpq_class> weights;
  long vsum = 0;
  for (const auto& f : factors) {
    weights.emplace_back(f.weight());
    vsum += f.valuation();
  }
  mpq_class order = kUnbounded;
  for (const auto& f : factors) order = min_q(order, mpq_class(f.order() + vsum - f.valuation()));
  MultiSeries out(weights, order);
  std::vector<std::pair<std::vector<mpq_class>, mpq_class>> acc{{{}, mpq_class(1)}};
  for (const auto& f : factors) {
    std::vector<std::pair<std::vector<mpq_class>, mpq_class>> nxt;
    for (const auto& [alpha, c] : acc)
      for (size_t j = 0; j < f.raw().size(); ++j) {
        if (f.raw()[j] == 0) continue;
        auto a = alpha;
        a.emplace_back(f.n_min() + long(j));
        nxt.emplace_back(std::move(a), c * f.raw()[j]);
      }
    acc = std::move(nxt);
  }
  for (const auto& [alpha, c] : acc) out.add_term(0, alpha, c);
  return out;
}

mpq_class MultiSeries::valuation() const {
  if (terms_.empty()) return order_;
  bool first = true;
  mpq_class v;
  for (const auto& [k, c] : terms_) {
    mpq_class t = weight_sum(k.alpha);
    if (first || t < v) v = t;
    first = false;
  }
  return v;
}

bool MultiSeries::is_holomorphic() const {
  for (const auto& [k, c] : terms_)
    if (k.w1 != 0) return false;
  return true;
}

void MultiSeries::add_term(int w1, const std::vector<mpq_class>& alpha, const mpq_class& c) {
  if (int(alpha.size()) != d()) throw DomainError("exponent vector has the wrong length");
  if (c == 0 || weight_sum(alpha) >= order_) return;
  mpq_class cc = c;
  cc.canonicalize();
  auto [it, inserted] = terms_.emplace(MKey{w1, alpha}, cc);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiSeries MultiSeries::with_weights(std::vector<mpq_class> weights) const {
  if (weights.size() != weights_.size()) throw DomainError("weight vector has the wrong length");
  MultiSeries s = *this;
  s.weights_ = std::move(weights);
  return s;
}

MultiSeries MultiSeries::operator+(const MultiSeries& o) const {
  if (weights_ != o.weights_) throw DomainError("adding multi-series of different weights");
  MultiSeries s(weights_, min_q(order_, o.order_));
  for (const auto& [k, c] : terms_) s.add_term(k.w1, k.alpha, c);
  for (const auto& [k, c] : o.terms_) s.add_term(k.w1, k.alpha, c);
  return s;
}

MultiSeries MultiSeries::operator-(const MultiSeries& o) const { return *this + o.scaled(-1); }

MultiSeries MultiSeries::operator*(const MultiSeries& o) const {
  if (d() != o.d()) throw DomainError("multiplying multi-series in different numbers of variables");
  std::vector<mpq_class> w(weights_);
  for (int j = 0; j < d(); ++j) w[j] += o.weights_[j];
  MultiSeries s(w, min_q(order_ + o.valuation(), o.order_ + valuation()));
  std::vector<mpq_class> alpha(d());
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      for (int j = 0; j < d(); ++j) alpha[j] = a.alpha[j] + b.alpha[j];
      s.add_term(a.w1 + b.w1, alpha, ca * cb);
    }
  return s;
}

MultiSeries MultiSeries::scaled(const mpq_class& c) const {
  MultiSeries s(weights_, order_);
  for (const auto& [k, v] : terms_) s.add_term(k.w1, k.alpha, v * c);
  return s;
}

MultiSeries MultiSeries::inverse() const {
  if (!is_holomorphic()) throw DomainError("inverse: series must be holomorphic");
  if (terms_.empty()) throw DomainError("inverse: zero series at this truncation");
  mpq_class v = valuation();
  const MKey* lead = nullptr;
  mpq_class c0;
  for (const auto& [k, c] : terms_) {
    if (weight_sum(k.alpha) != v) continue;
    if (lead) throw DomainError("inverse: leading total exponent is shared by several terms");
    lead = &k;
    c0 = c;
  }
  std::vector<mpq_class> a0 = lead->alpha;
  std::vector<mpq_class> zero(d(), mpq_class(0));
  // g = c0 q^{a0} (1 + h)
  MultiSeries h(weights_, order_ - v);
  std::vector<mpq_class> alpha(d());
  for (const auto& [k, c] : terms_) {
    if (&k == lead) continue;
    for (int j = 0; j < d(); ++j) alpha[j] = k.alpha[j] - a0[j];
    h.add_term(0, alpha, c / c0);
  }
  MultiSeries sum(weights_, order_ - v);
  sum.add_term(0, zero, 1);
  MultiSeries p = sum;
  MultiSeries neg = h.scaled(-1);
  while (true) {
    MultiSeries prod = p * neg;
    p = MultiSeries(weights_, order_ - v);
    for (const auto& [k, c] : prod.terms_) p.add_term(k.w1, k.alpha, c);
    if (p.terms_.empty()) break;
    sum = sum + p;
  }
  std::vector<mpq_class> w(weights_);
  for (auto& x : w) x = -x;
  MultiSeries out(w, order_ - 2 * v);
  for (const auto& [k, c] : sum.terms_) {
    for (int j = 0; j < d(); ++j) alpha[j] = k.alpha[j] - a0[j];
    out.add_term(0, alpha, c / c0);
  }
  return out;
}

MultiSeries MultiSeries::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  MultiSeries r(std::vector<mpq_class>(d(), mpq_class(0)), order_ - valuation());
  r.add_term(0, std::vector<mpq_class>(d(), mpq_class(0)), 1);
  for (long i = 0; i < e; ++i) r = r * *this;
  return r;
}

NearlyHoloSeries MultiSeries::diagonal() const {
  NearlyHoloSeries s(weight_sum(weights_), order_);
  for (const auto& [k, c] : terms_) s.add_term(k.w1, 0, weight_sum(k.alpha), c);
  return s;
}

NearlyHoloSeries c1_restrict(const MultiSeries& f, const std::vector<mpq_class>& kappa, int r) {
  if (f.d() < 2) throw DomainError("c1_restrict: needs at least two variables");
  if (int(kappa.size()) != f.d()) throw DomainError("c1_restrict: weight vector has the wrong length");
  if (r < 0) throw DomainError("c1_restrict: r must be >= 0");
  const mpq_class& k1 = kappa[0];
  mpq_class k2 = weight_sum(kappa, 1);
  std::vector<mpq_class> coef(r + 1);
  for (int s = 0; s <= r; ++s) {
    coef[s] = binom(k1 + r - 1, s) * binom(k2 + r - 1, r - s);
    if ((r - s) % 2) coef[s] = -coef[s];
  }
  NearlyHoloSeries out(k1 + k2 + 2 * r, f.order());
  for (const auto& [key, c] : f.terms()) {
    const mpq_class& a1 = key.alpha[0];
    mpq_class rest = weight_sum(key.alpha) - a1;
    NearlyHoloSeries A = NearlyHoloSeries::monomial(k1, key.w1, a1, 1, kUnbounded);
    NearlyHoloSeries B = NearlyHoloSeries::monomial(k2, 0, rest, 1, kUnbounded);
    for (int s = 0; s <= r; ++s) {
      if (coef[s] == 0) continue;
      NearlyHoloSeries t = raise(A, r - s) * raise(B, s);
      for (const auto& [tk, tc] : t.terms()) out.add_term(tk.i, tk.p, tk.n, tc * coef[s] * c);
    }
  }
  return out;
}

NearlyHoloSeries dc_operator(const MultiSeries& f, const MultiSeries& g, const std::vector<mpq_class>& kappa, int r) {
  if (!g.is_holomorphic()) throw DomainError("dc_operator: g must be holomorphic");
  MultiSeries h = f * g.inverse();
  NearlyHoloSeries c = c1_restrict(h, kappa, r);
  return g.pow(r + 1).with_weights(g.weights()).diagonal().with_weight(weight_sum(g.weights()) * (r + 1)) * c;
}

std::map<std::vector<int>, mpq_class> dc_coefficients(const std::vector<mpq_class>& kappa, int r) {
  int d = int(kappa.size());
  if (d < 2) throw DomainError("dc_coefficients: needs at least two variables");
  const mpq_class& k1 = kappa[0];
  mpq_class k2 = weight_sum(kappa, 1);
  std::map<std::vector<int>, mpq_class> out;
  std::vector<int> e(d, 0);
  // enumerate compositions of r into d parts
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == d - 1) {
      e[j] = left;
      int s = r - e[0];
      mpz_class multi, f;
      mpz_fac_ui(multi.get_mpz_t(), s);
      for (int i = 1; i < d; ++i) {
        mpz_fac_ui(f.get_mpz_t(), e[i]);
        multi /= f;
      }
      mpq_class a = binom(k1 + r - 1, s) * binom(k2 + r - 1, e[0]) * mpq_class(multi);
      if (s % 2) a = -a;
      out[e] = a;
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[j] = x;
      rec(j + 1, left - x);
    }
  };
  rec(0, r);
  return out;
}

NearlyHoloSeries dc_operator_expanded(const MultiSeries& f, const MultiSeries& g,
                                      const std::vector<mpq_class>& kappa, int r) {
  if (!f.is_holomorphic() || !g.is_holomorphic()) throw DomainError("dc_operator_expanded: inputs must be holomorphic");
  MultiSeries h = f * g.inverse();
  MultiSeries G = g.pow(r + 1);
  auto table = dc_coefficients(kappa, r);
  MultiSeries acc(G.weights(), mpq_class(0));
  bool first = true;
  for (const auto& [e, a] : table) {
    if (a == 0) continue;
    MultiSeries dh(h.weights(), h.order());
    for (const auto& [k, c] : h.terms()) {
      mpq_class m = c * a;
      for (int j = 0; j < h.d(); ++j) m *= qpow(k.alpha[j], e[j]);
      dh.add_term(0, k.alpha, m);
    }
    MultiSeries t = G * dh;
    acc = first ? t : acc + t;
    first = false;
  }
  mpq_class wt = weight_sum(kappa) + 2 * r + weight_sum(g.weights()) * (r + 1);
  if (first) return NearlyHoloSeries(wt, (G * h).order());
  return acc.diagonal().with_weight(wt);
}

RRCTable rrc_coefficients(const mpq_class& k, const mpq_class& l, int r0) {
  if (r0 < 0) throw DomainError("rrc_coefficients: r0 must be >= 0");
  // The base level needs no hypothesis; (k, l) = (1, 1) is solvable at every level.
  for (int r = 1; r <= r0; ++r)
    if (k + l + 2 * r - 2 == 0)
      throw DomainError("rrc_coefficients: k + l + 2r - 2 = 0 at r = " + std::to_string(r));
  RRCTable c(r0 + 1);
  c[0] = {{mpq_class(1)}};
  for (int r = 0; r < r0; ++r) {
    mpq_class cert = binom(k + l + 2 * r, r + 1);
    if (cert == 0)
      throw DomainError("rrc_coefficients: certificate C(k+l+2r, r+1) vanishes at r = " + std::to_string(r) +
                        "; the level " + std::to_string(r + 1) + " system is singular");
    int n = r + 2;
    // rows: x_a + x_{a+1} = sum_j c[r][a][j] Y_j (a <= r); bracket row = Y_{r+1}
    std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n)), B(n, std::vector<mpq_class>(n));
    for (int a = 0; a <= r; ++a) {
      M[a][a] = 1;
      M[a][a + 1] = 1;
      for (int j = 0; j <= r; ++j) B[a][j] = c[r][a][j];
    }
    for (int a = 0; a <= r + 1; ++a) {
      mpq_class v = binom(k + r, r + 1 - a) * binom(l + r, a);
      M[r + 1][a] = a % 2 ? -v : v;
    }
    B[r + 1][r + 1] = 1;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      while (piv < n && M[piv][col] == 0) ++piv;
      if (piv == n) throw DomainError("rrc_coefficients: singular system at r = " + std::to_string(r + 1));
      std::swap(M[piv], M[col]);
      std::swap(B[piv], B[col]);
      mpq_class inv = 1 / M[col][col];
      for (int j = 0; j < n; ++j) {
        M[col][j] *= inv;
        B[col][j] *= inv;
      }
      for (int i = 0; i < n; ++i) {
        if (i == col || M[i][col] == 0) continue;
        mpq_class f = M[i][col];
        for (int j = 0; j < n; ++j) {
          M[i][j] -= f * M[col][j];
          B[i][j] -= f * B[col][j];
        }
      }
    }
    c[r + 1] = B;
  }
  return c;
}

}  // namespace greencm::rc
