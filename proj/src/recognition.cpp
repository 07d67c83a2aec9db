#include "greencm/recognition.hpp"
#include "greencm/errors.hpp"
#include "greencm/lll.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace greencm::recognition {

namespace {

// log2|x|, or `floor` for x = 0.
double log2_abs(const Real& x, double floor) {
  if (x.is_zero()) return floor;
  long e;
  double m = mpfr_get_d_2exp(&e, x.raw(), MPFR_RNDN);
  return std::log2(std::fabs(m)) + double(e);
}

std::vector<long> primes_up_to(long B) {
  std::vector<long> out;
  if (B < 2) return out;
  std::vector<bool> comp(B + 1, false);
  for (long p = 2; p <= B; ++p) {
    if (comp[p]) continue;
    out.push_back(p);
    for (long q = p * p; q <= B; q += p) comp[q] = true;
  }
  return out;
}

bool is_square(long n) {
  if (n < 0) return false;
  long s = long(std::llround(std::sqrt(double(n))));
  for (long t = std::max(0L, s - 1); t <= s + 1; ++t)
    if (t * t == n) return true;
  return false;
}

Real dot(const std::vector<mpz_class>& c, const std::vector<Real>& xs, Precision wp) {
  Real s(wp);
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) s += Real(c[i], wp) * xs[i];
  return s;
}

mpz_class max_abs(const std::vector<mpz_class>& c) {
  mpz_class m = 0;
  for (const auto& x : c) m = std::max<mpz_class>(m, abs(x));
  return m;
}

// Smallest squared Gram-Schmidt length of the rows.
mpq_class min_gs_norm2(const IntMatrix& rows) {
  size_t n = rows.size(), dim = rows[0].size();
  std::vector<std::vector<mpq_class>> star;
  std::vector<mpq_class> norms;
  mpq_class best = -1;
  for (size_t i = 0; i < n; ++i) {
    std::vector<mpq_class> v(dim);
    for (size_t k = 0; k < dim; ++k) v[k] = rows[i][k];
    for (size_t j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (size_t k = 0; k < dim; ++k) num += mpq_class(rows[i][k]) * star[j][k];
      mpq_class mu = num / norms[j];
      for (size_t k = 0; k < dim; ++k) v[k] -= mu * star[j][k];
    }
    mpq_class nn = 0;
    for (const auto& x : v) nn += x * x;
    star.push_back(v);
    norms.push_back(nn);
    if (best < 0 || nn < best) best = nn;
  }
  return best;
}

nlohmann::json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

int decimal_digits(Precision p) { return std::max(10, int(double(p) * 0.30103) - 2); }

}  // namespace

Precision required_precision(size_t n, const mpz_class& H, double max_abs_log2) {
  double h = std::log2(2.0 * mpz_class(H).get_d() + 1.0);
  double bits = (double(n) - 1.0) * h + std::max(0.0, max_abs_log2) + std::log2(double(n)) + 8.0;
  return Precision(std::ceil(bits / kResidualExponent));
}

RelationResult integer_relation(const std::vector<Real>& xs, Precision p, const mpz_class& H,
                                const std::vector<std::string>& labels) {
  const size_t n = xs.size();
  if (n < 2) throw DomainError("integer_relation needs at least two numbers");
  if (H < 1) throw DomainError("height bound must be >= 1");
  if (!labels.empty() && labels.size() != n) throw DomainError("one label per input is required");
  double mx = -1e9;
  for (const auto& x : xs) {
    if (x.precision() < p) throw DomainError("inputs must carry at least the search precision");
    mx = std::max(mx, log2_abs(x, -1e9));
  }
  Precision need = required_precision(n, H, mx);
  if (p < need)
    throw PrecisionError("integer_relation: " + std::to_string(n) + " numbers with height bound " + H.get_str() +
                         " need at least " + std::to_string(need) + " bits, got " + std::to_string(p));

  RelationResult res;
  res.precision = p;
  res.max_height = H;
  res.residual = Real(p);
  for (size_t i = 0; i < n; ++i) res.labels.push_back(labels.empty() ? "x" + std::to_string(i + 1) : labels[i]);

  const long scale = long(p) - 8;
  IntMatrix rows(n, std::vector<mpz_class>(n + 1, mpz_class(0)));
  for (size_t i = 0; i < n; ++i) {
    rows[i][i] = 1;
    rows[i][n] = to_mpz(ldexp(xs[i], scale));
  }
  IntMatrix red = lll_reduce(rows);
  const double gate = -kResidualExponent * double(p);
  const Precision wp = p + 32;
  for (const auto& row : red) {
    std::vector<mpz_class> c(row.begin(), row.begin() + n);
    mpz_class h = max_abs(c);
    if (h == 0 || h > H) continue;
    Real r = abs(dot(c, xs, wp));
    double rl = log2_abs(r, -double(p));
    if (rl >= gate) continue;
    mpz_class g = 0;
    for (const auto& x : c) g = gcd(g, x);
    for (auto& x : c) x /= g;
    for (const auto& x : c)
      if (x != 0) {
        if (x < 0)
          for (auto& y : c) y = -y;
        break;
      }
    res.found = true;
    res.coeffs = c;
    res.residual = abs(dot(c, xs, wp)).with_precision(p);
    res.residual_log2 = log2_abs(res.residual, -double(p));
    return res;
  }
  // Every lattice vector has length >= min |b_i*|; a relation of height <= H
  // would give one of length <= (sqrt(n) + n) H + 2^{0.2 p}.
  double gs = 0.5 * std::log2(min_gs_norm2(red).get_d());
  double rel = std::log2((std::sqrt(double(n)) + double(n)) * mpz_class(H).get_d() +
                         std::exp2((1.0 - kResidualExponent) * double(p)));
  res.excluded_norm_log2 = gs;
  res.certified_absent = rel < gs;
  return res;
}

void verify_double_precision(RelationResult& rel, const std::vector<Real>& xs_2p) {
  rel.verified_at_double_precision = false;
  if (!rel.found) return;
  if (xs_2p.size() != rel.coeffs.size()) throw DomainError("verification inputs do not match the relation");
  Precision p2 = 2 * rel.precision;
  Real r2 = abs(dot(rel.coeffs, xs_2p, p2 + 32));
  double l2 = log2_abs(r2, -double(p2));
  rel.shrink_log2 = rel.residual_log2 - l2;
  rel.verified_at_double_precision = rel.shrink_log2 >= kShrinkExponent * double(rel.precision);
}

long field_discriminant(long n) {
  if (n <= 0 || is_square(n)) throw DomainError("field_discriminant: need a positive non-square");
  long s = n;
  for (long q = 2; q * q <= s; ++q)
    while (s % (q * q) == 0) s /= q * q;
  return s % 4 == 1 ? s : 4 * s;
}

QuadraticUnit fundamental_unit(long D) {
  if (D <= 0 || is_square(D) || (D % 4 != 0 && D % 4 != 1))
    throw DomainError("fundamental_unit: D must be a positive non-square discriminant");
  // Continued fraction of -conj(w) = (P + sqrt(Delta))/Q; convergents u/v with N(u + v w) = +-1.
  mpz_class P, Q, Delta, tr, nw;
  if (D % 4 == 0) {
    Delta = D / 4;
    P = 0;
    Q = 1;
    tr = 0;
    nw = -Delta;
  } else {
    Delta = D;
    P = -1;
    Q = 2;
    tr = 1;
    nw = mpz_class((1 - D) / 4);
  }
  mpz_class s = sqrt(Delta);
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (int it = 0; it < 100000; ++it) {
    mpz_class a;
    if (Q > 0) mpz_fdiv_q(a.get_mpz_t(), mpz_class(P + s).get_mpz_t(), Q.get_mpz_t());
    else mpz_fdiv_q(a.get_mpz_t(), mpz_class(P + s + 1).get_mpz_t(), Q.get_mpz_t());
    mpz_class h = a * h1 + h2, k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    if (k > 0) {
      mpz_class N = h * h + h * k * tr + k * k * nw;
      if (N == 1 || N == -1) {
        QuadraticUnit u;
        u.disc = D;
        u.u = h;
        u.v = k;
        return u;
      }
    }
    P = a * Q - P;
    Q = (Delta - P * P) / Q;
  }
  throw UnsupportedError("fundamental_unit: continued fraction period too long");
}

Real QuadraticUnit::log_abs(Precision prec) const {
  Precision wp = prec + 32;
  Real w = disc % 4 == 0 ? sqrt(Real(disc / 4, wp)) : (sqrt(Real(disc, wp)) + 1L) / 2L;
  return log(abs(Real(u, wp) + Real(v, wp) * w)).with_precision(prec);
}

std::string QuadraticUnit::to_string() const {
  if (disc % 4 == 0) return u.get_str() + "+" + v.get_str() + "*sqrt(" + std::to_string(disc / 4) + ")";
  mpz_class x = 2 * u + v;
  return "(" + x.get_str() + "+" + v.get_str() + "*sqrt(" + std::to_string(disc) + "))/2";
}

std::vector<std::string> FactorBase::labels() const {
  std::vector<std::string> out;
  for (long p : primes) out.push_back("log " + std::to_string(p));
  if (has_unit) out.push_back("log|" + unit.to_string() + "|");
  return out;
}

std::vector<Real> FactorBase::logs(Precision prec) const {
  std::vector<Real> out;
  for (long p : primes) out.push_back(log(Real(p, prec + 32)).with_precision(prec));
  if (has_unit) out.push_back(unit.log_abs(prec));
  return out;
}

FactorBase gz_factor_base(long d1, long d2, long B, bool with_unit) {
  if (d1 >= 0 || d2 >= 0) throw DomainError("discriminants must be negative");
  long N = d1 * d2;
  std::set<long> ps;
  for (long x = -long(std::sqrt(double(N))) - 1; x * x < N || x < 0; ++x) {
    if (x * x >= N) continue;
    if (((x % 2) + 2) % 2 != N % 2) continue;
    long v = (N - x * x) / 4;
    for (long q = 2; q * q <= v; ++q)
      while (v % q == 0) {
        if (q <= B) ps.insert(q);
        v /= q;
      }
    if (v > 1 && v <= B) ps.insert(v);
  }
  FactorBase fb;
  fb.primes.assign(ps.begin(), ps.end());
  if (with_unit && !is_square(N)) {
    fb.has_unit = true;
    fb.unit = fundamental_unit(field_discriminant(N));
  }
  return fb;
}

FactorBase prime_factor_base(long B) {
  FactorBase fb;
  fb.primes = primes_up_to(B);
  return fb;
}

LogAlgebraicCandidate recognize_log_algebraic(const std::function<Real(Precision)>& Xfn, const FactorBase& base,
                                              long K, Precision p) {
  if (K < 1) throw DomainError("kappa bound K must be >= 1");
  LogAlgebraicCandidate out;
  Real X = Xfn(p);
  std::vector<Real> logs = base.logs(p);
  std::vector<std::string> labels{"kappa*X"};
  for (const auto& l : base.labels()) labels.push_back(l);
  const size_t n = labels.size();
  out.x_digits = X.to_string(decimal_digits(p));

  double mx = std::max(0.0, log2_abs(X, 0.0) + std::log2(double(K)));
  for (const auto& l : logs) mx = std::max(mx, log2_abs(l, 0.0));
  double budget = (kResidualExponent * double(p) - 8.0 - mx - std::log2(double(n))) / (double(n) - 1.0) - 1.0;
  long hbits = std::min(64L, long(std::floor(budget)));
  if (hbits < 4)
    throw PrecisionError("recognize_log_algebraic: " + std::to_string(n) + " basis elements leave no room for a height bound at " +
                         std::to_string(p) + " bits");
  mpz_class H = mpz_class(1) << hbits;
  std::string frontier = "kappa <= " + std::to_string(K) + ", height <= 2^" + std::to_string(hbits) +
                         ", factor base {" ;
  for (size_t i = 0; i < base.primes.size(); ++i) frontier += (i ? "," : "") + std::to_string(base.primes[i]);
  frontier += std::string("}") + (base.has_unit ? " + unit " + base.unit.to_string() : "") + ", " +
              std::to_string(p) + " bits";
  out.frontier = frontier;

  for (long kappa = 1; kappa <= K; ++kappa) {
    std::vector<Real> xs{X * kappa};
    xs.insert(xs.end(), logs.begin(), logs.end());
    RelationResult rel = integer_relation(xs, p, H, labels);
    if (!rel.found || rel.coeffs[0] == 0) continue;
    mpz_class c0 = abs(rel.coeffs[0]);
    if (c0 != 1) {
      // the relation module has rank one, so kappa * c0 is the next candidate
      mpz_class next = c0 * kappa;
      if (next > K) break;
      kappa = next.get_si() - 1;
      continue;
    }
    if (rel.coeffs[0] < 0)
      for (auto& c : rel.coeffs) c = -c;
    Real X2 = Xfn(2 * p);
    std::vector<Real> xs2{X2 * kappa};
    for (auto& l : base.logs(2 * p)) xs2.push_back(l);
    verify_double_precision(rel, xs2);
    out.relation = rel;
    out.kappa = kappa;
    if (!rel.verified_at_double_precision) {
      out.frontier += "; candidate at kappa = " + std::to_string(kappa) + " rejected by the double-precision gate";
      out.found = false;
      return out;
    }
    out.found = true;
    for (size_t i = 1; i < n; ++i)
      if (rel.coeffs[i] != 0) out.alpha_exponents.emplace_back(labels[i], -rel.coeffs[i]);
    out.abs_alpha_digits = exp(X * kappa).to_string(30);
    return out;
  }
  out.relation.labels = labels;
  out.relation.precision = p;
  out.relation.max_height = H;
  out.relation.residual = Real(p);
  return out;
}

LogAlgebraicCandidate recognize_log_algebraic(const std::function<Real(Precision)>& X, long d1, long d2, long B,
                                              long K, Precision p) {
  return recognize_log_algebraic(X, gz_factor_base(d1, d2, B), K, p);
}

nlohmann::json to_json(const RelationResult& r) {
  nlohmann::json rel = nlohmann::json::array();
  for (size_t i = 0; i < r.coeffs.size(); ++i) rel.push_back({r.labels[i], integer_json(r.coeffs[i])});
  nlohmann::json j{{"found", r.found},
                   {"labels", r.labels},
                   {"relation", rel},
                   {"precision", long(r.precision)},
                   {"max_height", r.max_height.get_str()},
                   {"verified", r.verified_at_double_precision}};
  if (r.found) {
    j["residual_log2"] = r.residual_log2;
    j["shrink_log2"] = r.shrink_log2;
  } else {
    j["certified_absent"] = r.certified_absent;
    j["excluded_norm_log2"] = r.excluded_norm_log2;
  }
  return j;
}

nlohmann::json to_json(const LogAlgebraicCandidate& c) {
  nlohmann::json rel = nlohmann::json::array();
  if (c.found)
    for (size_t i = 0; i < c.relation.coeffs.size(); ++i)
      rel.push_back({c.relation.labels[i], integer_json(c.relation.coeffs[i])});
  nlohmann::json j{{"X_digits", c.x_digits},
                   {"kappa", c.found ? nlohmann::json(c.kappa) : nlohmann::json(nullptr)},
                   {"relation", rel},
                   {"residual_log2", c.found ? nlohmann::json(c.relation.residual_log2) : nlohmann::json(nullptr)},
                   {"verified", c.found && c.relation.verified_at_double_precision},
                   {"precision", long(c.relation.precision)},
                   {"frontier", c.frontier}};
  if (c.found) {
    j["shrink_log2"] = c.relation.shrink_log2;
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& [label, e] : c.alpha_exponents) ex.push_back({label, integer_json(e)});
    j["abs_alpha_exponents"] = ex;
    j["abs_alpha"] = c.abs_alpha_digits;
  } else {
    j["status"] = "not-found";
    j["note"] = "no candidate within the search frontier; this leaves the statement unverified, not falsified";
  }
  return j;
}

CmValue cm_value(const quadforms::Form& form1, const quadforms::Form& form2, int r, long f_index, Precision prec) {
  if (r < 1) throw DomainError("r must be >= 1");
  if (f_index < 1) throw DomainError("f-index must be >= 1");
  CmValue v;
  v.form1 = form1;
  v.form2 = form2;
  v.d1 = form1.disc();
  v.d2 = form2.disc();
  v.r = r;
  v.f_index = f_index;
  qseries::QExpansion f = qseries::weakly_holomorphic_basis(-2 * r, f_index, 1);
  Precision wp = prec + 16;
  green::GreenParams gp;
  gp.prec = wp;
  gp.tail_policy = green::TailPolicy::heuristic;
  Complex z1 = quadforms::HeegnerPoint{form1}.z(wp + 16), z2 = quadforms::HeegnerPoint{form2}.z(wp + 16);
  green::GreenValue g = green::green_f(z1, z2, r, f, gp);
  Real factor = pow(sqrt(Real(v.d1 * v.d2, wp)), long(r));
  v.value = (g.value * factor).with_precision(prec);
  v.tail = (g.tail_estimate * factor).with_precision(64);
  v.method = g.method;
  return v;
}

CmValue cm_value(long d1, long d2, int r, long f_index, Precision prec) {
  return cm_value(quadforms::principal_form(d1), quadforms::principal_form(d2), r, f_index, prec);
}

nlohmann::json to_json(const CmValue& v) {
  int digits = decimal_digits(v.value.precision());
  return {{"d1", v.d1},
          {"d2", v.d2},
          {"r", v.r},
          {"f_index", v.f_index},
          {"form1", v.form1.to_string()},
          {"form2", v.form2.to_string()},
          {"value", v.value.to_string(digits)},
          {"valid_digits", digits},
          {"tail", v.tail.to_string(6)},
          {"method", v.method},
          {"precision", long(v.value.precision())}};
}

namespace {

void stability_gate(const Real& value, const Real& tail, Precision p) {
  Real bound = max(abs(value), Real(1L, 64)) * pow2(-long(0.9 * double(p)), 64);
  if (tail > bound)
    throw PrecisionError("value not stable to 0.9p bits at " + std::to_string(p) + " bits (tail " +
                         tail.to_string(4) + ")");
}

}  // namespace

LogAlgebraicCandidate recognize_cm_value(long d1, long d2, int r, long f_index, long B, long K, Precision p) {
  return recognize_cm_value(quadforms::principal_form(d1), quadforms::principal_form(d2), r, f_index, B, K, p);
}

LogAlgebraicCandidate recognize_cm_value(const quadforms::Form& form1, const quadforms::Form& form2, int r,
                                         long f_index, long B, long K, Precision p) {
  FactorBase base = gz_factor_base(form1.disc(), form2.disc(), B);
  std::map<Precision, Real> memo;
  auto X = [&](Precision prec) {
    auto it = memo.find(prec);
    if (it != memo.end()) return it->second;
    CmValue v = cm_value(form1, form2, r, f_index, prec);
    stability_gate(v.value, v.tail, prec);
    memo.emplace(prec, v.value);
    return v.value;
  };
  return recognize_log_algebraic(X, base, K, p);
}

OrbitReport orbit_average_check(long d1, long d2, int r, long f_index, long B, long T, Precision p) {
  if (r % 2 != 0) throw DomainError("orbit_average_check expects even r");
  auto pairs = quadforms::galois_orbit_pairs(d1, d2);
  quadforms::Form p1 = quadforms::principal_form(d1), p2 = quadforms::principal_form(d2);
  OrbitReport rep;
  rep.d1 = d1;
  rep.d2 = d2;
  rep.r = r;
  rep.f_index = f_index;

  std::map<Precision, std::vector<OrbitPairValue>> memo;
  auto values = [&](Precision prec) -> const std::vector<OrbitPairValue>& {
    auto it = memo.find(prec);
    if (it != memo.end()) return it->second;
    std::vector<OrbitPairValue> vals;
    for (const auto& pr : pairs) {
      CmValue v = cm_value(quadforms::act(p1, pr.sigma1), quadforms::act(p2, pr.sigma2), r, f_index, prec);
      stability_gate(v.value, v.tail, prec);
      vals.push_back(OrbitPairValue{v.form1, v.form2, v.value, v.tail});
    }
    return memo.emplace(prec, std::move(vals)).first->second;
  };
  auto orbit_sum = [&](Precision prec) {
    Real s(prec);
    for (const auto& v : values(prec)) s += v.value;
    return s;
  };

  rep.pairs = values(p);
  rep.sum = orbit_sum(p);
  rep.combined_tail = Real(0L, 64);
  for (const auto& v : rep.pairs) rep.combined_tail += v.tail;
  // additivity against the 2p evaluation of each pair
  Real resum(p);
  for (const auto& v : values(2 * p)) resum += v.value;
  rep.additivity_error = abs(rep.sum - resum).with_precision(64);
  Real rounding(0L, 64);
  for (const auto& v : rep.pairs) rounding += abs(v.value);
  rep.additivity_tolerance = rep.combined_tail * 2L + rounding * pow2(2 - long(p), 64);

  FactorBase base = gz_factor_base(d1, d2, B, false);
  rep.recognition = recognize_log_algebraic(orbit_sum, base, T, p);
  if (rep.recognition.found) {
    std::string num, den;
    for (const auto& [label, e] : rep.recognition.alpha_exponents) {
      std::string prime = label.substr(4);
      std::string term = prime + (abs(e) == 1 ? "" : "^" + mpz_class(abs(e)).get_str());
      std::string& side = e > 0 ? num : den;
      side += (side.empty() ? "" : "*") + term;
    }
    rep.rational = (num.empty() ? "1" : num) + (den.empty() ? "" : "/(" + den + ")");
  }
  return rep;
}

nlohmann::json to_json(const OrbitReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& v : r.pairs)
    pairs.push_back({{"form1", v.form1.to_string()},
                     {"form2", v.form2.to_string()},
                     {"value", v.value.to_string(decimal_digits(v.value.precision()))},
                     {"tail", v.tail.to_string(6)}});
  nlohmann::json j{{"d1", r.d1},
                   {"d2", r.d2},
                   {"r", r.r},
                   {"f_index", r.f_index},
                   {"pairs", pairs},
                   {"orbit_sum", r.sum.to_string(decimal_digits(r.sum.precision()))},
                   {"additivity_error", r.additivity_error.to_string(6)},
                   {"combined_tail", r.combined_tail.to_string(6)},
                   {"additivity_tolerance", r.additivity_tolerance.to_string(6)},
                   {"additive", r.additivity_error <= r.additivity_tolerance},
                   {"recognition", to_json(r.recognition)}};
  if (r.recognition.found) {
    j["t"] = r.recognition.kappa;
    j["rational"] = r.rational;
  }
  return j;
}

}  // namespace greencm::recognition
