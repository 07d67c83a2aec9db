#pragma once

#include "greencm/greeneval.hpp"
#include "greencm/qseries.hpp"
#include "greencm/quadforms.hpp"
#include "greencm/real.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace greencm::recognition {

// Acceptance gates: residual below 2^{-0.8 p}, and shrink by at least 2^{0.5 p}
// when the inputs are recomputed at 2p bits.
constexpr double kResidualExponent = 0.8;
constexpr double kShrinkExponent = 0.5;

// Values of the inputs at a requested working precision.
using ValueFn = std::function<std::vector<Real>(Precision)>;

struct RelationResult {
  bool found = false;
  std::vector<std::string> labels;
  std::vector<mpz_class> coeffs;   // first nonzero entry positive
  Real residual;                   // |sum c_i x_i| at the search precision
  Precision precision = 0;
  mpz_class max_height;
  bool verified_at_double_precision = false;
  double residual_log2 = 0;
  double shrink_log2 = 0;          // log2(residual_p / residual_2p)
  // not-found: every relation of height <= max_height is excluded when certified
  bool certified_absent = false;
  double excluded_norm_log2 = 0;
};

// Smallest precision at which a relation of height <= H among n numbers of
// magnitude <= max_abs is not forced by pigeonhole below the residual gate.
Precision required_precision(size_t n, const mpz_class& H, double max_abs_log2);

// Throws PrecisionError when p is below required_precision.
RelationResult integer_relation(const std::vector<Real>& xs, Precision p, const mpz_class& H,
                                const std::vector<std::string>& labels = {});

// Recomputes the inputs at 2p and fills the double-precision fields.
void verify_double_precision(RelationResult& rel, const std::vector<Real>& xs_2p);

// Fundamental unit (u + v w) of the real quadratic order of discriminant D,
// with w = sqrt(D/4) or (1 + sqrt(D))/2.
struct QuadraticUnit {
  long disc = 0;
  mpz_class u, v;
  Real log_abs(Precision prec) const;
  std::string to_string() const;
};
// D > 0 not a square; D = 0, 1 mod 4.
QuadraticUnit fundamental_unit(long D);
// Field discriminant of Q(sqrt(n)) for n > 0 not a square.
long field_discriminant(long n);

struct FactorBase {
  std::vector<long> primes;
  bool has_unit = false;
  QuadraticUnit unit;
  std::vector<std::string> labels() const;
  std::vector<Real> logs(Precision prec) const;
};

// Primes p <= B dividing some (d1 d2 - x^2)/4 with x^2 < d1 d2, x = d1 d2 mod 2,
// and the fundamental unit of Q(sqrt(d1 d2)) when requested and d1 d2 is not a square.
FactorBase gz_factor_base(long d1, long d2, long B, bool with_unit = true);
// All primes p <= B.
FactorBase prime_factor_base(long B);

struct LogAlgebraicCandidate {
  bool found = false;
  long kappa = 0;
  RelationResult relation;                    // over [kappa X, logs...]
  std::vector<std::pair<std::string, mpz_class>> alpha_exponents;  // |alpha| = prod b^e
  std::string x_digits;
  std::string abs_alpha_digits;               // exp(kappa X)
  std::string frontier;                       // search limits when not found
};

// Searches kappa = 1..K with kappa X in the span of the factor base logs.
LogAlgebraicCandidate recognize_log_algebraic(const std::function<Real(Precision)>& X, const FactorBase& base,
                                              long K, Precision p);
LogAlgebraicCandidate recognize_log_algebraic(const std::function<Real(Precision)>& X, long d1, long d2, long B,
                                              long K, Precision p);

nlohmann::json to_json(const RelationResult& r);
nlohmann::json to_json(const LogAlgebraicCandidate& c);

// (d1 d2)^{r/2} G_{r+1,f}(z1, z2) at the Heegner points of the two forms,
// with f = f_{-2r, m} from the weakly holomorphic basis.
struct CmValue {
  long d1 = 0, d2 = 0;
  int r = 0;
  long f_index = 1;
  quadforms::Form form1, form2;
  Real value;
  Real tail;
  std::string method;
};
CmValue cm_value(const quadforms::Form& form1, const quadforms::Form& form2, int r, long f_index, Precision prec);
CmValue cm_value(long d1, long d2, int r, long f_index, Precision prec);
nlohmann::json to_json(const CmValue& v);

// Pipeline for one CM pair: stability gate, then recognize_log_algebraic.
LogAlgebraicCandidate recognize_cm_value(long d1, long d2, int r, long f_index, long B, long K, Precision p);
LogAlgebraicCandidate recognize_cm_value(const quadforms::Form& form1, const quadforms::Form& form2, int r,
                                         long f_index, long B, long K, Precision p);

struct OrbitPairValue {
  quadforms::Form form1, form2;
  Real value;   // (d1 d2)^{r/2} G_{r+1,f}
  Real tail;
};

struct OrbitReport {
  long d1 = 0, d2 = 0;
  int r = 0;
  long f_index = 1;
  std::vector<OrbitPairValue> pairs;
  Real sum;
  Real additivity_error;   // |sum - sum of pair values| recomputed independently
  Real combined_tail;
  Real additivity_tolerance;   // combined tails plus rounding of the p-bit sum
  LogAlgebraicCandidate recognition;   // kappa plays the role of t
  std::string rational;               // exp(t S) as a product of prime powers
};

OrbitReport orbit_average_check(long d1, long d2, int r, long f_index, long B, long T, Precision p);
nlohmann::json to_json(const OrbitReport& r);

}  // namespace greencm::recognition
