// Acceptance runner: one PASS/FAIL line per criterion, tolerances fixed below.

#include "greencm/errors.hpp"
#include "greencm/greeneval.hpp"
#include "greencm/lattices.hpp"
#include "greencm/quadforms.hpp"
#include "greencm/rc_ops.hpp"
#include "greencm/recognition.hpp"
#include "greencm/special_functions.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>

using namespace greencm;
using nlohmann::json;

namespace {

// Criterion 1
constexpr Precision kBridgePrec = 128;
constexpr long kBridgeStartB = 8;
constexpr long kBridgeMaxB = 64;
constexpr double kBridgeTailTarget = 1e-20;
// Criterion 2
constexpr Precision kInvariancePrec = 128;
constexpr double kInvarianceTol = 1e-25;
// Criterion 3
constexpr Precision kLaplacePrec = 320;
constexpr long kLaplaceStepLog2 = -40;
constexpr double kLaplaceTol = 1e-6;
// Delta = -y^2 (d_x^2 + d_y^2); G_s satisfies Delta G_s = kLaplaceSign s(s-1) G_s.
constexpr int kLaplaceSign = -1;
// Criterion 4
constexpr long kLowerOrder = 12;
// Criteria 6 and 7
constexpr Precision kRecognitionPrec = 512;
constexpr long kFactorBound = 1000;
constexpr long kKappaBound = 10000;
// Criterion 8
constexpr Precision kPlantedPrec = 256;
constexpr int kPlantedCount = 100;

struct Outcome {
  bool pass = false;
  std::string summary;
  json report;
};

std::string sci(const Real& x, int digits = 6) { return x.to_string(digits); }

// x + iy with x a short rational and y = a + log(3)/b, so y^2 is transcendental and the point is not CM.
Complex non_cm_point(std::mt19937_64& rng, double y_lo, Precision p) {
  long xn = long(rng() % 801) - 400;
  long yn = long(rng() % 300);
  Real x = Real(xn, p) / 1000L;
  Real y = Real(y_lo, p) + Real(yn, p) / 1000L + log(Real(3L, p)) / 50L;
  return Complex(x, y);
}

std::vector<std::pair<Complex, Complex>> point_pairs(std::uint64_t seed, int count, Precision p) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Complex, Complex>> out;
  for (int i = 0; i < count; ++i) {
    Complex z1 = non_cm_point(rng, 1.6, p);
    Complex z2 = non_cm_point(rng, 0.95, p);
    out.emplace_back(z1, z2);
  }
  return out;
}

json point_json(const Complex& z) { return {z.re.to_string(20), z.im.to_string(20)}; }

Outcome criterion1() {
  Outcome o;
  auto pairs = point_pairs(11, 3, kBridgePrec);
  int total = 0, paper_ok = 0, tails_ok = 0, derived_ok = 0;
  Real worst_tail(0L, 64);
  json cases = json::array();
  for (const auto& [z1, z2] : pairs)
    for (long m : {1, 2, 3})
      for (int r : {1, 2}) {
        int s = r + 1;
        green::GreenParams pp{kBridgePrec, kBridgeStartB, green::TailPolicy::heuristic, green::Method::automatic,
                              kBridgeMaxB};
        green::GreenValue phi = green::phi_hypergeometric(z1, z2, m, s, pp);
        green::GreenValue g = green::green_hecke(z1, z2, s, m, green::GreenParams{kBridgePrec});
        Real paper_c = Real(2L * (r % 2 ? -1 : 1), kBridgePrec) / gamma(Real(long(2 * r + 2), kBridgePrec));
        Real derived_c = Real(-2L, kBridgePrec) / gamma(Real(long(r + 1), kBridgePrec));
        Real paper_diff = abs(phi.value - paper_c * g.value);
        Real paper_tol = phi.tail_estimate + abs(paper_c) * g.tail_estimate;
        Real bound = green::phi_tail_bound(z1, z2, m, s, phi.B_used, kBridgePrec);
        Real derived_diff = abs(phi.value - derived_c * g.value);
        Real derived_tol = bound + abs(derived_c) * g.tail_estimate;
        bool p_ok = paper_diff < paper_tol;
        bool t_ok = phi.tail_estimate.to_double() <= kBridgeTailTarget && g.tail_estimate.to_double() <= kBridgeTailTarget;
        bool d_ok = derived_diff < derived_tol;
        ++total;
        paper_ok += p_ok;
        tails_ok += t_ok;
        derived_ok += d_ok;
        worst_tail = max(worst_tail, phi.tail_estimate.with_precision(64));
        cases.push_back({{"z1", point_json(z1)},
                         {"z2", point_json(z2)},
                         {"m", m},
                         {"r", r},
                         {"B", phi.B_used},
                         {"phi", sci(phi.value, 20)},
                         {"phi_tail", sci(phi.tail_estimate)},
                         {"phi_tail_bound", sci(bound)},
                         {"G", sci(g.value, 20)},
                         {"G_tail", sci(g.tail_estimate)},
                         {"paper_constant_residual", sci(paper_diff)},
                         {"derived_constant_residual", sci(derived_diff)},
                         {"paper_constant_ok", p_ok},
                         {"tails_ok", t_ok},
                         {"derived_constant_ok", d_ok}});
      }
  o.pass = paper_ok == total && tails_ok == total;
  o.summary = "2(-1)^r/Gamma(2r+2) bridge " + std::to_string(paper_ok) + "/" + std::to_string(total) +
              "; tails <= 1e-20 " + std::to_string(tails_ok) + "/" + std::to_string(total) + " (largest Phi tail " +
              sci(worst_tail, 3) + " at B <= " + std::to_string(kBridgeMaxB) + "); -2/r! bridge " +
              std::to_string(derived_ok) + "/" + std::to_string(total) + " within the rigorous tail";
  o.report = {{"cases", cases}, {"paper_constant_passes", paper_ok}, {"tail_target_passes", tails_ok},
              {"derived_constant_passes", derived_ok}, {"total", total}};
  return o;
}

Outcome criterion2() {
  Outcome o;
  using green::Mat2;
  auto mul = [](const Mat2& a, const Mat2& b) {
    return Mat2{a.a * b.a + a.b * b.c, a.a * b.b + a.b * b.d, a.c * b.a + a.d * b.c, a.c * b.b + a.d * b.d};
  };
  const Mat2 T{1, 1, 0, 1}, S{0, -1, 1, 0}, Ti{1, -1, 0, 1};
  std::vector<Mat2> gens{T, S, mul(S, T), mul(T, S), mul(mul(Ti, Ti), S), mul(mul(S, mul(T, mul(T, T))), S)};
  auto pairs = point_pairs(23, 2, kInvariancePrec);
  Real worst(0L, 64);
  json cases = json::array();
  for (const auto& [z1, z2] : pairs)
    for (long m : {1, 2})
      for (int s : {2, 3}) {
        green::GreenParams gp{kInvariancePrec};
        Real base = green::green_hecke(z1, z2, s, m, gp).value;
        Real err(0L, 64);
        for (const auto& g : gens) {
          err = max(err, abs(green::green_hecke(green::apply(g, z1), z2, s, m, gp).value - base).with_precision(64));
          err = max(err, abs(green::green_hecke(z1, green::apply(g, z2), s, m, gp).value - base).with_precision(64));
        }
        err = max(err, abs(green::green_hecke(z2, z1, s, m, gp).value - base).with_precision(64));
        worst = max(worst, err);
        cases.push_back({{"m", m}, {"s", s}, {"value", sci(base, 20)}, {"max_deviation", sci(err, 3)}});
      }
  o.pass = worst.to_double() < kInvarianceTol;
  o.summary = "max deviation " + sci(worst, 3) + " over 6 generator products per variable and the swap (tol 1e-25)";
  o.report = {{"cases", cases}, {"max_deviation", sci(worst, 3)}};
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto pairs = point_pairs(37, 3, kLaplacePrec);
  Real h = pow2(kLaplaceStepLog2, kLaplacePrec);
  double worst = 0;
  json cases = json::array();
  for (const auto& [z1, z2] : pairs)
    for (int s : {2, 3}) {
      auto G = [&](const Real& dx, const Real& dy) {
        return green::green_core(Complex(z1.re + dx, z1.im + dy), z2, s, green::GreenParams{kLaplacePrec}).value;
      };
      Real zero(kLaplacePrec);
      Real g0 = G(zero, zero);
      Real lap = (G(h, zero) + G(-h, zero) + G(zero, h) + G(zero, -h) - g0 * 4L) / (h * h);
      Real ratio = -(z1.im * z1.im) * lap / g0;
      double target = double(kLaplaceSign * s * (s - 1));
      double dev = std::fabs(ratio.to_double() - target);
      worst = std::max(worst, dev);
      cases.push_back({{"s", s}, {"ratio", sci(ratio, 15)}, {"target", target}});
    }
  o.pass = worst < kLaplaceTol;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", worst);
  o.summary = std::string("Delta G / G = ") + (kLaplaceSign < 0 ? "-" : "+") + "s(s-1), max deviation " + buf +
              " (tol 1e-6)";
  o.report = {{"cases", cases}, {"sign", kLaplaceSign}};
  return o;
}

rc::NearlyHoloSeries random_nh(std::mt19937& rng, const mpq_class& k, long order) {
  rc::NearlyHoloSeries f(k, mpq_class(order));
  for (long n = 0; n < order; ++n)
    if (rng() % 3) f.add_term(0, 0, mpq_class(n), mpq_class(long(rng() % 19) - 9, long(rng() % 4) + 1));
  return f;
}

rc::MultiSeries random_multi(std::mt19937& rng, std::vector<mpq_class> weights, long order, bool unit_lead) {
  int d = int(weights.size());
  rc::MultiSeries f(weights, mpq_class(order));
  std::vector<mpq_class> alpha(d);
  std::function<void(int, long)> rec = [&](int j, long left) {
    if (j == d) {
      if (rng() % 2) f.add_term(0, alpha, mpq_class(long(rng() % 11) - 5, long(rng() % 3) + 1));
      return;
    }
    for (long a = 0; a <= left; ++a) {
      alpha[j] = a;
      rec(j + 1, left - a);
    }
  };
  rec(0, order - 1);
  if (unit_lead) {
    std::vector<mpq_class> zero(d, mpq_class(0));
    auto it = f.terms().find(rc::MKey{0, zero});
    mpq_class cur = it == f.terms().end() ? mpq_class(0) : it->second;
    f.add_term(0, zero, 2 - cur);
  }
  return f;
}

Outcome criterion4() {
  using namespace rc;
  Outcome o;
  json parts;
  // Legendre identity for weight (1, 1)
  bool legendre = true;
  for (auto [a1, a2] : {std::pair<mpq_class, mpq_class>{mpq_class(3, 2), mpq_class(1, 2)}, {5, -2}, {mpq_class(7, 3), mpq_class(2, 5)}}) {
    NearlyHoloSeries f = NearlyHoloSeries::monomial(1, 0, a1, 1, 100), g = NearlyHoloSeries::monomial(1, 0, a2, 1, 100);
    mpq_class tr = a1 + a2;
    for (int r = 0; r <= 6; ++r) {
      mpq_class expect = special::legendre_P(r, mpq_class((a1 - a2) / tr));
      for (int i = 0; i < r; ++i) expect *= tr;
      NearlyHoloSeries br = rc_bracket(f, g, r);
      legendre = legendre && br.coeff(0, tr) == expect && br.terms().size() <= 1;
    }
  }
  parts["legendre_r_le_6"] = legendre;
  // R^a f R^{r-a} g = sum_j c_{r,a,j} R^{r-j} [f, g]_j
  bool comb = true;
  std::mt19937 rng(5);
  for (auto [k, l] : {std::pair<mpq_class, mpq_class>{1, 1}, {4, 6}, {mpq_class(1, 2), mpq_class(5, 2)}, {-3, 8}}) {
    auto c = rrc_coefficients(k, l, 3);
    NearlyHoloSeries f = random_nh(rng, k, 10), g = random_nh(rng, l, 10);
    for (int r = 0; r <= 3; ++r)
      for (int a = 0; a <= r; ++a) {
        NearlyHoloSeries lhs = raise(f, a) * raise(g, r - a);
        NearlyHoloSeries rhs(k + l + 2 * r, lhs.order());
        for (int j = 0; j <= r; ++j) rhs = rhs + raise(rc_bracket(f, g, j), r - j).scaled(c[r][a][j]);
        comb = comb && lhs.agrees_with(rhs);
      }
  }
  parts["comb_r_le_3"] = comb;
  // holomorphic inputs give holomorphic brackets; level-1 weight-12 brackets land in C * Delta
  bool holo = true;
  for (int t = 0; t < 12; ++t) {
    mpq_class k1(long(rng() % 9) - 2), k2(long(rng() % 9) + 1);
    holo = holo && rc_bracket(random_nh(rng, k1, 8), random_nh(rng, k2, 8), int(t % 5)).depth() == 0;
  }
  qseries::QExpansion delta = qseries::standard_form(qseries::StandardForm::Delta, 12);
  for (auto [a, b, r] : {std::tuple<int, int, int>{4, 6, 1}, {4, 4, 2}, {6, 6, 0}}) {
    NearlyHoloSeries f = NearlyHoloSeries::from_qexpansion(qseries::eisenstein(a, 12));
    NearlyHoloSeries g = NearlyHoloSeries::from_qexpansion(qseries::eisenstein(b, 12));
    NearlyHoloSeries br = rc_bracket(f, g, r);
    if (r == 0) br = br - NearlyHoloSeries::from_qexpansion(qseries::eisenstein(12, 12)).scaled(br.coeff(0, 0));
    mpq_class lead = br.coeff(0, 1);
    bool prop = br.depth() == 0 && lead != 0 && br.coeff(0, 0) == 0;
    for (long n = 1; n < 12; ++n) prop = prop && br.coeff(0, n) == lead * delta.coeff(n);
    holo = holo && prop;
  }
  parts["holomorphicity"] = holo;
  // a_e integrality
  bool integral = true;
  for (int d = 2; d <= 3; ++d)
    for (int r = 0; r <= 3; ++r)
      for (int code = 0; code < (d == 2 ? 16 : 64); ++code) {
        std::vector<mpq_class> kappa;
        for (int j = 0, c = code; j < d; ++j, c /= 4) kappa.emplace_back(1 + c % 4);
        for (const auto& [e, a] : dc_coefficients(kappa, r)) integral = integral && a.get_den() == 1;
      }
  parts["a_e_integral"] = integral;
  // L_1 D = C(k_1 + r - 1, r) g^{r+1} R^r (L_1 f / g) for g independent of tau_1
  bool lowered = true;
  std::mt19937 rng2(41);
  for (int r = 0; r <= 3; ++r) {
    std::vector<mpq_class> kappa{2, 1, 2};
    MultiSeries f0 = random_multi(rng2, kappa, kLowerOrder, false);
    MultiSeries f(kappa, kLowerOrder), f1c(kappa, kLowerOrder);
    for (const auto& [key, c] : f0.terms()) f.add_term(0, key.alpha, c);
    MultiSeries f1 = random_multi(rng2, kappa, kLowerOrder, false);
    for (const auto& [key, c] : f1.terms())
      if (key.alpha[0] == 0) {
        f.add_term(1, key.alpha, c);
        f1c.add_term(0, key.alpha, c);
      }
    MultiSeries g(std::vector<mpq_class>{0, 0, 0}, kLowerOrder);
    MultiSeries g_all = random_multi(rng2, {0, 0, 0}, kLowerOrder, true);
    for (const auto& [key, c] : g_all.terms())
      if (key.alpha[0] == 0) g.add_term(0, key.alpha, c);
    NearlyHoloSeries lhs = lower(dc_operator(f, g, kappa, r));
    NearlyHoloSeries inner = (f1c * g.inverse()).diagonal().with_weight(kappa[0] + kappa[1] + kappa[2] - 2);
    NearlyHoloSeries gd = g.diagonal(), gp = gd;
    for (int i = 0; i < r; ++i) gp = gp * gd;
    NearlyHoloSeries rhs = (gp * raise(inner, r)).scaled(binom(kappa[0] + r - 1, r) * mpq_class(-1, 4), 1);
    lowered = lowered && lhs.agrees_with(rhs.with_weight(lhs.weight())) && lhs.order() >= kLowerOrder - 2;
  }
  parts["lemma_lower_order_12"] = lowered;
  o.pass = legendre && comb && holo && integral && lowered;
  int ok = legendre + comb + holo + integral + lowered;
  o.summary = std::to_string(ok) + "/5 exact identity groups hold (Legendre r<=6, combination r<=3, "
              "holomorphicity, a_e integrality, lowering at order 12)";
  o.report = parts;
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto e4 = qseries::standard_form(qseries::StandardForm::E4, 20);
  auto theta = lattices::theta_series_enumerated(lattices::e8(), 20);
  bool e8_ok = true;
  for (long n = 0; n < 20; ++n) e8_ok = e8_ok && theta.coeff(n) == e4.coeff(n);
  auto te8 = lattices::theta_series(lattices::e8(), 120);
  auto tle = lattices::theta_series(lattices::leech(), 120);
  auto cert = lattices::partition_of_unity({{"E8", te8, 1}, {"Leech", tle, 1}}, 50);
  auto reloaded = lattices::certificate_from_json(json::parse(lattices::to_json(cert).dump()));
  bool pou_ok = cert.verified_order == 50 && lattices::verify_certificate(reloaded);
  Poly j4 = Poly(std::vector<mpq_class>{0, 0, 0, 0, 1});
  Poly shift = Poly(std::vector<mpq_class>{-720, 1});
  Poly shift12 = Poly::constant(1);
  for (int i = 0; i < 12; ++i) shift12 = shift12 * shift;
  bool a_ok = cert.A[0] == j4 && cert.A[1] == shift12;
  std::string diag;
  bool single_fails = false;
  try {
    lattices::partition_of_unity({{"E8", te8, 1}}, 10);
  } catch (const DomainError& e) {
    diag = e.what();
    single_fails = diag.find("j^4") != std::string::npos;
  }
  o.pass = e8_ok && pou_ok && a_ok && single_fails;
  o.summary = std::string("theta_E8 = E4 to order 20: ") + (e8_ok ? "yes" : "no") +
              "; {E8, Leech} certificate verified to order 50: " + (pou_ok ? "yes" : "no") +
              "; A = j^4, (j-720)^12: " + (a_ok ? "yes" : "no") + "; single E8: " + (single_fails ? diag : "no gcd failure");
  o.report = {{"theta_E8_equals_E4", e8_ok}, {"pou_verified", pou_ok}, {"A_polynomials", a_ok},
              {"single_input_diagnostic", diag}, {"certificate_sha", std::to_string(lattices::to_json(cert).dump().size())}};
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto cand = recognition::recognize_cm_value(-3, -4, 1, 1, kFactorBound, kKappaBound, kRecognitionPrec);
  double gate = -recognition::kResidualExponent * double(kRecognitionPrec);
  double shrink = recognition::kShrinkExponent * double(kRecognitionPrec);
  o.report = recognition::to_json(cand);
  if (!cand.found) {
    o.pass = false;
    o.summary = "not-found within " + cand.frontier + " (unverified, not falsified)";
    return o;
  }
  o.pass = cand.relation.residual_log2 < gate && cand.relation.shrink_log2 >= shrink;
  std::string rel;
  for (const auto& [label, e] : cand.alpha_exponents) rel += (rel.empty() ? "" : " ") + label + "^" + e.get_str();
  char buf[160];
  std::snprintf(buf, sizeof buf, "kappa = %ld, |alpha| exponents {%s}, residual 2^%.1f, shrink 2^%.1f", cand.kappa,
                rel.c_str(), cand.relation.residual_log2, cand.relation.shrink_log2);
  o.summary = buf;
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto rep = recognition::orbit_average_check(-4, -23, 2, 1, kFactorBound, kKappaBound, kRecognitionPrec);
  o.report = recognition::to_json(rep);
  bool additive = rep.additivity_error <= rep.additivity_tolerance;
  const auto& c = rep.recognition;
  double gate = -recognition::kResidualExponent * double(kRecognitionPrec);
  double shrink = recognition::kShrinkExponent * double(kRecognitionPrec);
  bool rec = c.found && c.relation.residual_log2 < gate && c.relation.shrink_log2 >= shrink;
  o.pass = rec && additive && rep.pairs.size() == 3;
  o.summary = std::to_string(rep.pairs.size()) + "-pair orbit; " +
              (c.found ? "t = " + std::to_string(c.kappa) + ", exp(t S) = " + rep.rational : "not recognized") +
              "; additivity error " + sci(rep.additivity_error, 3) + " (tolerance " + sci(rep.additivity_tolerance, 3) + ")";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Precision p = kPlantedPrec;
  std::mt19937_64 rng(808);
  const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  int recovered = 0;
  for (int trial = 0; trial < kPlantedCount; ++trial) {
    std::set<long> used;
    while (used.size() < 4) used.insert(primes[rng() % 25]);
    std::vector<Real> xs;
    std::vector<long> want;
    Real target(p);
    for (long q : used) {
      long c = long(rng() % 2001) - 1000;
      want.push_back(c);
      xs.push_back(log(Real(q, p)));
      target += xs.back() * c;
    }
    if (std::all_of(want.begin(), want.end(), [](long x) { return x == 0; })) {
      want[0] = 1;
      target += xs[0];
    }
    xs.push_back(target);
    want.push_back(-1);
    long g = 0;
    for (long x : want) g = std::gcd(g, x);
    long sign = 0;
    for (long x : want)
      if (x != 0 && sign == 0) sign = x > 0 ? 1 : -1;
    for (auto& x : want) x = x / g * sign;
    auto r = recognition::integer_relation(xs, p, mpz_class(10000));
    bool ok = r.found;
    for (size_t i = 0; ok && i < want.size(); ++i) ok = r.coeffs[i] == want[i];
    recovered += ok;
  }
  auto none = recognition::integer_relation({Real(1L, p), pi(p), exp(Real(1L, p))}, p, mpz_class(1000000),
                                            {"1", "pi", "e"});
  o.pass = recovered == kPlantedCount && !none.found && none.certified_absent;
  o.summary = std::to_string(recovered) + "/" + std::to_string(kPlantedCount) + " planted relations recovered; [1, pi, e]: " +
              (none.found ? "spurious relation" : std::string("none up to height 1e6") + (none.certified_absent ? " (certified)" : ""));
  o.report = {{"recovered", recovered}, {"one_pi_e", recognition::to_json(none)}};
  return o;
}

using Runner = std::function<Outcome()>;

std::vector<Runner> runners() {
  return {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8};
}

Outcome criterion9() {
  Outcome o;
  auto rs = runners();
  int same = 0;
  json cases = json::array();
  for (int c = 1; c <= 7; ++c) {
    std::string a = rs[c - 1]().report.dump(), b = rs[c - 1]().report.dump();
    bool eq = a == b;
    same += eq;
    cases.push_back({{"criterion", c}, {"identical", eq}, {"bytes", a.size()}});
  }
  o.pass = same == 7;
  o.summary = std::to_string(same) + "/7 criterion reports byte-identical across two runs";
  o.report = {{"cases", cases}};
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  std::string json_dir;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--json-dir", json_dir, "Write each criterion report as JSON into this directory");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int c = 1; c <= 9; ++c) selected.push_back(c);

  auto rs = runners();
  rs.push_back(criterion9);
  bool all = true;
  for (int c : selected) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = rs[c - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char t[32];
    std::snprintf(t, sizeof t, "%.1f s", secs);
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << "  [" << t << "]"
              << std::endl;
    if (!json_dir.empty()) {
      std::filesystem::create_directories(json_dir);
      std::ofstream(json_dir + "/criterion" + std::to_string(c) + ".json") << o.report.dump(2) << "\n";
    }
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
