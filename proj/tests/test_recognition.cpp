#include "doctest.h"

#include "greencm/errors.hpp"
#include "greencm/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace greencm;
using namespace greencm::recognition;

namespace {

std::vector<long> coeffs_of(const RelationResult& r) {
  std::vector<long> out;
  for (const auto& c : r.coeffs) out.push_back(c.get_si());
  return out;
}

// Smallest unit u + v w > 1 by direct search over v.
std::pair<long, long> unit_by_search(long D) {
  bool half = D % 4 == 1;
  for (long v = 1; v < 100000; ++v)
    for (long u = -2 * v - 2; u <= 20 * v * v + 10; ++u) {
      long N = half ? u * u + u * v + v * v * ((1 - D) / 4) : u * u - (D / 4) * v * v;
      if (N != 1 && N != -1) continue;
      double w = half ? (1 + std::sqrt(double(D))) / 2 : std::sqrt(double(D / 4));
      if (u + v * w > 1) return {u, v};
    }
  return {0, 0};
}

}  // namespace

TEST_SUITE("recognition") {

TEST_CASE("golden ratio") {
  const Precision p = 128;
  Real phi = (sqrt(Real(5L, p)) + 1L) / 2L;
  RelationResult r = integer_relation({Real(1L, p), phi, phi * phi}, p, mpz_class(100));
  REQUIRE(r.found);
  CHECK(coeffs_of(r) == std::vector<long>{1, 1, -1});
  CHECK(r.residual_log2 < -0.8 * p);
}

TEST_CASE("log 4 = 2 log 2") {
  const Precision p = 128;
  RelationResult r = integer_relation({log(Real(2L, p)), log(Real(4L, p))}, p, mpz_class(100), {"log 2", "log 4"});
  REQUIRE(r.found);
  CHECK(coeffs_of(r) == std::vector<long>{2, -1});
  CHECK(r.labels[1] == "log 4");
}

TEST_CASE("no relation among 1, pi, e") {
  const Precision p = 256;
  Real e = exp(Real(1L, p));
  RelationResult r = integer_relation({Real(1L, p), pi(p), e}, p, mpz_class(1000000));
  CHECK_FALSE(r.found);
  CHECK(r.certified_absent);
  CHECK(r.excluded_norm_log2 > 60);
}

TEST_CASE("planted relations") {
  const Precision p = 256;
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<long> coef(-1000, 1000);
  std::uniform_int_distribution<long> prime_ix(0, 24);
  const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Real> xs;
    std::vector<long> c;
    std::set<long> used;
    while (used.size() < 4) used.insert(primes[prime_ix(rng)]);
    Real target(p);
    for (long q : used) {
      long ci = coef(rng);
      c.push_back(ci);
      xs.push_back(log(Real(q, p)));
      target += xs.back() * ci;
    }
    if (std::all_of(c.begin(), c.end(), [](long x) { return x == 0; })) c[0] = 1, target += xs[0];
    xs.push_back(target);
    RelationResult r = integer_relation(xs, p, mpz_class(10000));
    if (!r.found) continue;
    std::vector<long> want = c;
    want.push_back(-1);
    long g = 0;
    for (long x : want) g = std::gcd(g, x);
    for (auto& x : want) x /= g;
    long sign = 1;
    for (long x : want)
      if (x != 0) {
        sign = x > 0 ? 1 : -1;
        break;
      }
    for (auto& x : want) x *= sign;
    recovered += coeffs_of(r) == want;
  }
  CHECK(recovered == 100);
}

TEST_CASE("precision guard") {
  const Precision p = 64;
  std::vector<Real> xs;
  for (long q : {2, 3, 5, 7, 11, 13}) xs.push_back(log(Real(q, p)));
  CHECK_THROWS_AS(integer_relation(xs, p, mpz_class(1000000)), PrecisionError);
  CHECK_THROWS_AS(integer_relation({Real(1L, p)}, p, mpz_class(10)), DomainError);
  CHECK_THROWS_AS(integer_relation({Real(1L, 32), Real(2L, 32)}, p, mpz_class(10)), DomainError);
}

TEST_CASE("double-precision gate") {
  const Precision p = 128;
  Real phi = (sqrt(Real(5L, p)) + 1L) / 2L;
  RelationResult r = integer_relation({Real(1L, p), phi, phi * phi}, p, mpz_class(100));
  Real phi2 = (sqrt(Real(5L, 2 * p)) + 1L) / 2L;
  verify_double_precision(r, {Real(1L, 2 * p), phi2, phi2 * phi2});
  CHECK(r.verified_at_double_precision);
  CHECK(r.shrink_log2 >= 0.5 * p);
  // a value that is only accurate to p bits does not shrink
  RelationResult s = integer_relation({Real(1L, p), phi, phi * phi}, p, mpz_class(100));
  verify_double_precision(s, {Real(1L, 2 * p), phi.with_precision(2 * p), (phi * phi).with_precision(2 * p) + pow2(-long(p) - 2, 2 * p)});
  CHECK_FALSE(s.verified_at_double_precision);
}

TEST_CASE("fundamental units") {
  for (long D : {5L, 8L, 12L, 13L, 21L, 28L, 44L, 61L, 92L}) {
    QuadraticUnit u = fundamental_unit(D);
    auto [a, b] = unit_by_search(D);
    CHECK(u.u == a);
    CHECK(u.v == b);
  }
  CHECK(fundamental_unit(12).to_string() == "2+1*sqrt(3)");
  CHECK(fundamental_unit(92).to_string() == "24+5*sqrt(23)");
  CHECK(field_discriminant(12) == 12);
  CHECK(field_discriminant(92) == 92);
  CHECK(field_discriminant(45) == 5);
  CHECK_THROWS_AS(fundamental_unit(16), DomainError);
}

TEST_CASE("factor base") {
  FactorBase b = gz_factor_base(-3, -4, 1000);
  CHECK(b.primes == std::vector<long>{2, 3});
  REQUIRE(b.has_unit);
  CHECK(b.unit.to_string() == "2+1*sqrt(3)");
  FactorBase c = gz_factor_base(-4, -23, 1000, false);
  CHECK(c.primes == std::vector<long>{2, 7, 11, 19, 23});
  CHECK_FALSE(c.has_unit);
  CHECK(gz_factor_base(-4, -23, 10, false).primes == std::vector<long>{2, 7});
  CHECK(prime_factor_base(20).primes.size() == 8);
}

TEST_CASE("recognize simple logarithms") {
  const Precision p = 192;
  auto log2 = [](Precision q) { return log(Real(2L, q)); };
  LogAlgebraicCandidate a = recognize_log_algebraic(log2, -3, -4, 100, 10, p);
  REQUIRE(a.found);
  CHECK(a.kappa == 1);
  REQUIRE(a.alpha_exponents.size() == 1);
  CHECK(a.alpha_exponents[0].first == "log 2");
  CHECK(a.alpha_exponents[0].second == 1);

  auto half = [](Precision q) { return log(Real(3L, q) / Real(2L, q)) / 2L; };
  LogAlgebraicCandidate b = recognize_log_algebraic(half, -3, -4, 100, 10, p);
  REQUIRE(b.found);
  CHECK(b.kappa == 2);
  CHECK(coeffs_of(b.relation) == std::vector<long>{1, 1, -1, 0});
  CHECK(b.relation.verified_at_double_precision);

  auto cube_root = [](Precision q) { return log(Real(2L, q)) / 3L; };
  LogAlgebraicCandidate c = recognize_log_algebraic(cube_root, -3, -4, 100, 2, p);
  CHECK_FALSE(c.found);
  CHECK(c.frontier.find("kappa <= 2") != std::string::npos);
  CHECK(to_json(c)["status"] == "not-found");
}

TEST_CASE("CM pipeline for discriminants -3 and -4") {
  const Precision p = 256;
  LogAlgebraicCandidate c = recognize_cm_value(-3, -4, 1, 1, 1000, 100, p);
  REQUIRE(c.found);
  CHECK(c.relation.verified_at_double_precision);
  CHECK(c.relation.residual_log2 < -0.8 * p);
  nlohmann::json j = to_json(c);
  CHECK(j["verified"] == true);
  CHECK(j.contains("X_digits"));
  // the relation reproduces the value to the search precision
  CmValue v = cm_value(-3, -4, 1, 1, p);
  Real rebuilt(p);
  auto logs = gz_factor_base(-3, -4, 1000).logs(p);
  for (size_t i = 0; i < logs.size(); ++i) rebuilt -= logs[i] * c.relation.coeffs[i + 1].get_si();
  CHECK(abs(v.value * c.kappa - rebuilt).to_double() < 1e-60);
}

TEST_CASE("orbit check with class number one") {
  const Precision p = 192;
  OrbitReport rep = orbit_average_check(-4, -3, 2, 1, 1000, 100, p);
  REQUIRE(rep.pairs.size() == 1);
  CmValue v = cm_value(-4, -3, 2, 1, p);
  CHECK(abs(rep.sum - v.value).to_double() < 1e-50);
  CHECK(rep.additivity_error <= rep.additivity_tolerance);
  CHECK_THROWS_AS(orbit_average_check(-4, -3, 1, 1, 1000, 100, p), DomainError);
}

TEST_CASE("Galois orbit of size three") {
  const Precision p = 192;
  OrbitReport rep = orbit_average_check(-4, -23, 2, 1, 1000, 100, p);
  REQUIRE(rep.pairs.size() == 3);
  Real sum(p);
  for (const auto& pv : rep.pairs) sum += pv.value;
  CHECK(abs(sum - rep.sum).to_double() < 1e-50);
  CHECK(rep.additivity_error <= rep.additivity_tolerance);
  // conjugate classes (2, 1, 3) and (2, -1, 3) give equal values
  CHECK(abs(rep.pairs[1].value - rep.pairs[2].value).to_double() < 1e-50);
  REQUIRE(rep.recognition.found);
  CHECK(rep.recognition.relation.verified_at_double_precision);
  CHECK(to_json(rep)["rational"].is_string());
}

TEST_CASE("odd r orbit is rejected but single values exist") {
  CmValue v = cm_value(-3, -4, 1, 1, 128);
  CHECK(v.method.size() > 0);
  CHECK(to_json(v)["valid_digits"].get<int>() > 30);
  CHECK_THROWS_AS(cm_value(-3, -4, 0, 1, 128), DomainError);
}

}  // TEST_SUITE
