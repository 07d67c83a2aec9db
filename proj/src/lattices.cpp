#include "greencm/lattices.hpp"
#include "greencm/errors.hpp"
#include "greencm/lll.hpp"
#include "greencm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace greencm::lattices {

using qseries::QExpansion;

namespace {

void require_valid(const IntegralLattice& L) {
  if (!is_positive_definite(L)) throw DomainError("lattice is not positive definite");
  if (!is_even(L)) throw DomainError("lattice is not even (odd diagonal entry)");
}

// Counts of vectors x with x^T G x = 2n for n < order (Fincke-Pohst).
std::vector<mpz_class> count_shells(const IntegralLattice& L, long order) {
  const int n = L.rank;
  std::vector<mpz_class> counts(std::max(order, 0L));
  if (order <= 0) return counts;
  if (n == 0) {
    counts[0] = 1;
    return counts;
  }
  using LD = long double;
  std::vector<std::vector<LD>> q(n, std::vector<LD>(n, 0));
  for (int i = 0; i < n; ++i) {
    LD s = L.gram[i][i];
    for (int k = 0; k < i; ++k) s -= q[k][k] * q[k][i] * q[k][i];
    q[i][i] = s;
    for (int j = i + 1; j < n; ++j) {
      LD t = L.gram[i][j];
      for (int k = 0; k < i; ++k) t -= q[k][k] * q[k][i] * q[k][j];
      q[i][j] = t / q[i][i];
    }
  }
  const long max_norm = 2 * (order - 1);
  const LD bound = LD(max_norm) + 0.5L;

  auto run = [&](long first, long stride, std::vector<unsigned long long>& local) {
    std::vector<long> x(n, 0);
    std::vector<LD> T(n + 1), c(n);
    // level n-1 handled by the caller split
    T[n] = bound;
    std::function<void(int)> rec = [&](int i) {
      LD center = 0;
      for (int j = i + 1; j < n; ++j) center += q[i][j] * LD(x[j]);
      c[i] = center;
      LD rad = std::sqrt(std::max<LD>(T[i + 1], 0) / q[i][i]) + 1e-9L;
      long lo = long(std::ceil(-center - rad)), hi = long(std::floor(-center + rad));
      long idx = 0;
      for (long v = lo; v <= hi; ++v, ++idx) {
        if (i == n - 1 && (idx % stride) != first) continue;
        x[i] = v;
        LD y = LD(v) + center;
        T[i] = T[i + 1] - q[i][i] * y * y;
        if (T[i] < -1e-6L) continue;
        if (i > 0) {
          rec(i - 1);
        } else {
          long norm = 0;
          for (int a = 0; a < n; ++a) {
            if (x[a] == 0) continue;
            long row = 0;
            for (int b = 0; b < n; ++b) row += L.gram[a][b] * x[b];
            norm += x[a] * row;
          }
          if (norm <= max_norm) ++local[norm / 2];
        }
      }
    };
    rec(n - 1);
  };

  unsigned threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::vector<unsigned long long>> partial(threads, std::vector<unsigned long long>(order, 0));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, long(t), long(threads), std::ref(partial[t]));
  for (auto& th : pool) th.join();
  for (unsigned t = 0; t < threads; ++t)
    for (long m = 0; m < order; ++m) counts[m] += mpz_class(std::to_string(partial[t][m]));
  return counts;
}

// Product of Eisenstein series of weight k (k >= 0, k != 2, k even).
QExpansion eisenstein_monomial(int k, long order) {
  if (k == 0) return QExpansion::one(order);
  for (int b = 0; 6 * b <= k; ++b) {
    int rest = k - 6 * b;
    if (rest % 4 == 0) {
      QExpansion f = QExpansion::one(order);
      if (rest) f = f * qseries::standard_form(qseries::StandardForm::E4, order).pow(rest / 4);
      if (b) f = f * qseries::standard_form(qseries::StandardForm::E6, order).pow(b);
      return f.with_weight(k);
    }
  }
  throw DomainError("no Eisenstein monomial of weight " + std::to_string(k));
}

nlohmann::json poly_json(const Poly& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : p.coeffs()) a.push_back(qseries::rational_to_string(c));
  return a;
}

Poly poly_from_json(const nlohmann::json& j) {
  std::vector<mpq_class> c;
  for (const auto& x : j) c.push_back(qseries::rational_from_string(x.get<std::string>()));
  return Poly(c);
}

}  // namespace

IntegralLattice make_lattice(const Gram& gram, const std::string& label) {
  int n = int(gram.size());
  for (const auto& row : gram)
    if (int(row.size()) != n) throw DomainError("Gram matrix must be square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (gram[i][j] != gram[j][i]) throw DomainError("Gram matrix must be symmetric");
  return IntegralLattice{n, gram, label};
}

IntegralLattice e8() {
  // Cartan matrix of E8 (Bourbaki labelling).
  Gram g(8, std::vector<long>(8, 0));
  for (int i = 0; i < 8; ++i) g[i][i] = 2;
  auto edge = [&](int a, int b) { g[a][b] = g[b][a] = -1; };
  edge(0, 2);
  edge(1, 3);
  edge(2, 3);
  edge(3, 4);
  edge(4, 5);
  edge(5, 6);
  edge(6, 7);
  return make_lattice(g, "E8");
}

std::vector<std::vector<int>> golay_generators() {
  // Cyclic code of length 23 generated by 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11, extended by parity.
  const int gpoly[] = {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1};
  std::vector<std::vector<int>> rows;
  for (int s = 0; s < 12; ++s) {
    std::vector<int> w(24, 0);
    for (int i = 0; i < 12; ++i) w[(i + s) % 23] = gpoly[i];
    int wt = 0;
    for (int i = 0; i < 23; ++i) wt += w[i];
    w[23] = wt % 2;
    rows.push_back(w);
  }
  return rows;
}

IntegralLattice leech() {
  // sqrt(8) * Leech = span{2c : c in Golay}, 4(e_i +- e_j), (-3, 1^23)
  IntMatrix gens;
  for (const auto& c : golay_generators()) {
    std::vector<mpz_class> v(24);
    for (int i = 0; i < 24; ++i) v[i] = 2 * c[i];
    gens.push_back(v);
  }
  for (int j = 1; j < 24; ++j)
    for (int sgn : {1, -1}) {
      std::vector<mpz_class> v(24, mpz_class(0));
      v[0] = 4;
      v[j] = 4 * sgn;
      gens.push_back(v);
    }
  std::vector<mpz_class> w(24, mpz_class(1));
  w[0] = -3;
  gens.push_back(w);
  IntMatrix basis = lll_reduce(hnf_basis(gens));
  if (basis.size() != 24) throw DomainError("Leech construction produced a degenerate basis");
  Gram g(24, std::vector<long>(24));
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) {
      mpz_class s = 0;
      for (int c = 0; c < 24; ++c) s += basis[i][c] * basis[j][c];
      if (s % 8 != 0) throw DomainError("Leech construction is not integral");
      g[i][j] = mpz_class(s / 8).get_si();
    }
  return make_lattice(g, "Leech");
}

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b) {
  int n = a.rank + b.rank;
  Gram g(n, std::vector<long>(n, 0));
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) g[i][j] = a.gram[i][j];
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) g[a.rank + i][a.rank + j] = b.gram[i][j];
  std::string label = a.label.empty() || b.label.empty() ? "" : a.label + "+" + b.label;
  return IntegralLattice{n, g, label};
}

IntegralLattice scaled(const IntegralLattice& L, long c) {
  IntegralLattice out = L;
  for (auto& row : out.gram)
    for (auto& x : row) x *= c;
  out.label = L.label.empty() ? "" : L.label + "(" + std::to_string(c) + ")";
  return out;
}

// Fraction-free elimination; returns the leading principal minors.
static std::vector<mpz_class> leading_minors(const IntegralLattice& L) {
  int n = L.rank;
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = L.gram[i][j];
  std::vector<mpz_class> minors;
  mpz_class prev = 1;
  for (int k = 0; k < n; ++k) {
    minors.push_back(a[k][k]);
    if (a[k][k] == 0) {
      for (int r = k + 1; r < n; ++r) minors.push_back(0);
      return minors;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return minors;
}

mpz_class determinant(const IntegralLattice& L) {
  if (L.rank == 0) return 1;
  // leading minors may vanish for indefinite input; fall back to pivoting elimination over Q
  int n = L.rank;
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = L.gram[i][j];
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[c][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return mpz_class(det.get_num());
}

bool is_positive_definite(const IntegralLattice& L) {
  for (const auto& m : leading_minors(L))
    if (m <= 0) return false;
  return true;
}

bool is_even(const IntegralLattice& L) {
  for (int i = 0; i < L.rank; ++i)
    if (L.gram[i][i] % 2 != 0) return false;
  return true;
}

UnimodularCheck is_Z_unimodular(const IntegralLattice& L) {
  if (!is_even(L)) return {false, "odd diagonal entry: the form is not even"};
  if (!is_positive_definite(L)) return {false, "Gram matrix is not positive definite"};
  mpz_class d = determinant(L);
  if (d != 1) return {false, "Gram determinant is " + d.get_str() + ", not 1"};
  return {true, "even with Gram determinant 1"};
}

QExpansion theta_series_enumerated(const IntegralLattice& L, long order) {
  require_valid(L);
  if (L.rank % 2) throw UnsupportedError("theta series of odd rank lattices have half-integral weight");
  auto counts = count_shells(L, order);
  std::vector<mpq_class> c(counts.begin(), counts.end());
  return QExpansion(L.rank / 2, 0, order, c);
}

QExpansion theta_series_modular(const IntegralLattice& L, long order) {
  require_valid(L);
  auto check = is_Z_unimodular(L);
  if (!check.unimodular) throw DomainError("modular determination needs an even unimodular lattice: " + check.diagnostic);
  int k = L.rank / 2;
  long dim = k / 12 + (k % 12 == 2 ? 0 : 1);
  auto counts = count_shells(L, dim);
  long M = std::max(order, dim);
  QExpansion delta = qseries::standard_form(qseries::StandardForm::Delta, M);
  std::vector<QExpansion> basis;
  for (long j = 0; j < dim; ++j) basis.push_back((delta.pow(j) * eisenstein_monomial(k - 12 * int(j), M)).with_weight(k));
  std::vector<mpq_class> coef(dim);
  for (long m = 0; m < dim; ++m) {
    mpq_class s = mpq_class(counts[m]);
    for (long j = 0; j < m; ++j) s -= coef[j] * basis[j].coeff(m);
    coef[m] = s;  // basis[m] = q^m + O(q^{m+1})
  }
  QExpansion theta = QExpansion::zero(k, M);
  for (long j = 0; j < dim; ++j) theta = theta + basis[j] * coef[j];
  return theta.truncate(order);
}

// Connected components of the Gram graph; theta of an orthogonal sum is the product.
static std::vector<IntegralLattice> orthogonal_components(const IntegralLattice& L) {
  std::vector<int> comp(L.rank, -1);
  int ncomp = 0;
  for (int s = 0; s < L.rank; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < L.rank; ++b)
        if (comp[b] < 0 && L.gram[a][b] != 0) {
          comp[b] = ncomp;
          stack.push_back(b);
        }
    }
    ++ncomp;
  }
  std::vector<IntegralLattice> parts;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> idx;
    for (int i = 0; i < L.rank; ++i)
      if (comp[i] == c) idx.push_back(i);
    Gram g(idx.size(), std::vector<long>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) g[i][j] = L.gram[idx[i]][idx[j]];
    parts.push_back(IntegralLattice{int(idx.size()), g, ""});
  }
  return parts;
}

QExpansion theta_series(const IntegralLattice& L, long order) {
  if (L.rank == 0) return QExpansion::one(order);
  require_valid(L);
  auto parts = orthogonal_components(L);
  if (parts.size() > 1) {
    bool all_even_rank = true;
    for (const auto& P : parts) all_even_rank &= P.rank % 2 == 0;
    if (all_even_rank) {
      QExpansion t = QExpansion::one(order);
      for (const auto& P : parts) t = t * theta_series(P, order);
      return t.with_weight(L.rank / 2);
    }
  }
  if (is_Z_unimodular(L).unimodular) return theta_series_modular(L, order);
  return theta_series_enumerated(L, order);
}

PartitionCertificate partition_of_unity(const std::vector<PouInput>& inputs, long order) {
  if (inputs.empty()) throw DomainError("partition_of_unity: no inputs");
  if (order < 1) throw DomainError("partition_of_unity: order must be >= 1");
  PartitionCertificate cert;
  cert.inputs = inputs;
  long max_pole = 0;
  for (const auto& in : inputs) {
    if (in.exponent < 1) throw DomainError("exponents must be >= 1");
    if (in.theta.valuation() != 0 || in.theta.coeff(0) != 1)
      throw DomainError("input '" + in.label + "' must be holomorphic with constant term 1");
    if (in.theta.weight() <= 0) throw DomainError("input '" + in.label + "' must have positive weight");
    max_pole = std::max(max_pole, long(in.theta.weight()) * in.exponent);
  }
  // A_i as polynomials in j
  for (const auto& in : inputs) {
    long we = long(in.theta.weight()) * in.exponent;
    long need = we + 4;
    if (in.theta.order() < need)
      throw TruncationError("input '" + in.label + "' is too short", need);
    QExpansion th = in.theta.truncate(need);
    QExpansion dpow = qseries::standard_form(qseries::StandardForm::Delta, 2 * we + 4).pow(we);
    QExpansion a = th.pow(12 * in.exponent) * dpow.inverse();
    cert.A.push_back(as_j_polynomial(a));
  }
  // Bezout cofactors
  Poly g = cert.A[0];
  std::vector<Poly> B{Poly::constant(1)};
  for (size_t i = 1; i < cert.A.size(); ++i) {
    Poly s, t;
    Poly d = xgcd(g, cert.A[i], s, t);
    for (auto& b : B) b = b * s;
    B.push_back(t);
    g = d;
  }
  if (g.degree() != 0) {
    Poly m = g.monic();
    std::string msg = "gcd(A_1, ..., A_m) = " + m.to_string("j") + " != 1";
    if (m.degree() >= 1) {
      // report a rational common root when there is one among the linear factors
      mpq_class root = -m.coeff(0);
      if (m.degree() == 1) msg += "; common zero of the inputs at j = " + root.get_str();
      else {
        mpq_class r0 = 0;
        bool all_zero = true;
        for (int i = 0; i < m.degree(); ++i) all_zero &= m.coeff(i) == 0;
        if (all_zero) msg += "; common zero of the inputs at j = " + r0.get_str();
      }
    }
    throw DomainError(msg);
  }
  mpq_class inv = 1 / g.coeff(0);
  for (auto& b : B) b = b * inv;
  cert.B = B;
  // g_i = B_i(j) Delta^{-w_i e_i} (theta_i^{e_i})^{11}
  long max_deg = 0;
  for (const auto& b : B) max_deg = std::max<long>(max_deg, b.degree());
  long M = order + 2 * max_pole + max_deg + 4;
  for (const auto& in : inputs)
    if (in.theta.order() < M) throw TruncationError("input '" + in.label + "' is too short for the requested order", M);
  QExpansion total = QExpansion::zero(0, order);
  for (size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    long we = long(in.theta.weight()) * in.exponent;
    QExpansion th = in.theta.truncate(M);
    QExpansion dinv = qseries::standard_form(qseries::StandardForm::Delta, M + 2 * we).pow(we).inverse();
    QExpansion gi = (qseries::j_polynomial_expansion(B[i], M) * dinv * th.pow(11 * in.exponent)).with_weight(int(-we));
    if (gi.order() < order) throw TruncationError("internal order too small", M + order - gi.order());
    cert.g.push_back(gi.truncate(order));
    total = total + (gi * th.pow(in.exponent)).with_weight(0).truncate(order);
  }
  if (total.order() < order || !total.agrees_with(QExpansion::one(order)))
    throw PrecisionError("partition of unity failed to verify to the requested order");
  cert.verified_order = order;
  return cert;
}

bool verify_certificate(const PartitionCertificate& cert) {
  if (cert.g.size() != cert.inputs.size() || cert.A.size() != cert.inputs.size() || cert.B.size() != cert.inputs.size())
    return false;
  Poly s;
  for (size_t i = 0; i < cert.A.size(); ++i) s = s + cert.A[i] * cert.B[i];
  if (!(s == Poly::constant(1))) return false;
  long N = cert.verified_order;
  QExpansion total = QExpansion::zero(0, N);
  for (size_t i = 0; i < cert.inputs.size(); ++i) {
    const auto& in = cert.inputs[i];
    if (in.theta.order() < N + in.theta.weight() * in.exponent) return false;
    QExpansion term = (cert.g[i] * in.theta.pow(in.exponent)).with_weight(0);
    if (term.order() < N) return false;
    total = total + term.truncate(N);
  }
  return total.agrees_with(QExpansion::one(N)) && total.order() >= N;
}

nlohmann::json to_json(const PartitionCertificate& cert) {
  nlohmann::json j;
  j["verified_order"] = cert.verified_order;
  j["inputs"] = nlohmann::json::array();
  for (const auto& in : cert.inputs)
    j["inputs"].push_back({{"label", in.label}, {"exponent", in.exponent}, {"theta", qseries::to_json(in.theta)}});
  j["A"] = nlohmann::json::array();
  j["B"] = nlohmann::json::array();
  j["g"] = nlohmann::json::array();
  for (const auto& a : cert.A) j["A"].push_back(poly_json(a));
  for (const auto& b : cert.B) j["B"].push_back(poly_json(b));
  for (const auto& g : cert.g) j["g"].push_back(qseries::to_json(g));
  return j;
}

PartitionCertificate certificate_from_json(const nlohmann::json& j) {
  PartitionCertificate c;
  c.verified_order = j.at("verified_order").get<long>();
  for (const auto& in : j.at("inputs"))
    c.inputs.push_back(PouInput{in.at("label").get<std::string>(), qseries::qexpansion_from_json(in.at("theta")),
                                in.at("exponent").get<long>()});
  for (const auto& a : j.at("A")) c.A.push_back(poly_from_json(a));
  for (const auto& b : j.at("B")) c.B.push_back(poly_from_json(b));
  for (const auto& g : j.at("g")) c.g.push_back(qseries::qexpansion_from_json(g));
  return c;
}

Real theta_star_constant_term(int n, const Real& v1, Precision prec) {
  if (n % 2) throw UnsupportedError("odd n needs the metaplectic setting");
  if (n < 2) throw DomainError("n must be an even integer >= 2");
  if (!(v1 > 0L)) throw DomainError("v1 must be positive");
  Real v = v1.with_precision(prec);
  if (n == 2) return log(v);
  long s = n / 2 - 1;
  return pow(v, s) / s;
}

Real theta_star_profile(const std::vector<NormEntry>& norms, int n, const Real& v1, Precision prec) {
  Real value = theta_star_constant_term(n, v1, prec);
  Precision wp = prec + 32;
  Real s(long(n / 2 - 1), wp);
  Real four_pi = pi(wp) * 4L;
  Real v = v1.with_precision(wp);
  for (const auto& e : norms) {
    if (!(e.abs_q1 > 0L)) throw DomainError("|Q(lambda)_1| must be positive");
    Real x = four_pi * e.abs_q1.with_precision(wp);
    Real term = pow(x, -s) * special::incomplete_gamma(s, x * v, wp) * e.multiplicity;
    value -= term;
  }
  return value.with_precision(prec);
}

}  // namespace greencm::lattices
