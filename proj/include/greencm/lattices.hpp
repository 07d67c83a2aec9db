#pragma once

#include "greencm/poly.hpp"
#include "greencm/qseries.hpp"
#include "greencm/real.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace greencm::lattices {

using Gram = std::vector<std::vector<long>>;

// Positive definite lattice given by an integral Gram matrix, Q(x) = x^T G x / 2.
struct IntegralLattice {
  int rank = 0;
  Gram gram;
  std::string label;
};

// Checks symmetry and integrality of shape; positivity and parity are checked by the consumers.
IntegralLattice make_lattice(const Gram& gram, const std::string& label = "");
IntegralLattice e8();
IntegralLattice leech();
IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b);
IntegralLattice scaled(const IntegralLattice& L, long c);

mpz_class determinant(const IntegralLattice& L);
bool is_positive_definite(const IntegralLattice& L);
bool is_even(const IntegralLattice& L);

struct UnimodularCheck {
  bool unimodular = false;
  std::string diagnostic;
};
UnimodularCheck is_Z_unimodular(const IntegralLattice& L);

// Binary Golay code words of the extended quadratic-residue code of length 24 (generator rows).
std::vector<std::vector<int>> golay_generators();

// Theta series sum_x q^{Q(x)}; even unimodular lattices use the
// modular-determination path, everything else enumerates.
qseries::QExpansion theta_series(const IntegralLattice& L, long order);
qseries::QExpansion theta_series_enumerated(const IntegralLattice& L, long order);
// Only for even unimodular L: solve in M_{rank/2}(SL2(Z)) from the first dim coefficients.
qseries::QExpansion theta_series_modular(const IntegralLattice& L, long order);

struct PouInput {
  std::string label;
  qseries::QExpansion theta;  // holomorphic, constant term 1, integral weight
  long exponent = 1;
};

struct PartitionCertificate {
  std::vector<PouInput> inputs;
  std::vector<Poly> A;                  // A_i(j) = Delta^{-w_i e_i} (theta_i^{e_i})^{12}
  std::vector<Poly> B;                  // sum B_i A_i = 1
  std::vector<qseries::QExpansion> g;   // B_i(j) Delta^{-w_i e_i} (theta_i^{e_i})^{11}
  long verified_order = 0;
};

PartitionCertificate partition_of_unity(const std::vector<PouInput>& inputs, long order);
// Recomputes sum g_i theta_i^{e_i} and compares with 1 below the stored order.
bool verify_certificate(const PartitionCertificate& cert);
nlohmann::json to_json(const PartitionCertificate& cert);
PartitionCertificate certificate_from_json(const nlohmann::json& j);

struct NormEntry {
  Real abs_q1;        // |Q(lambda)_1| > 0
  long multiplicity;
};

// -sum mult (4 pi a)^{1-n/2} Gamma(n/2-1, 4 pi a v1) plus the lambda = 0 term
// v1^{n/2-1}/(n/2-1) (log v1 when n = 2).
Real theta_star_profile(const std::vector<NormEntry>& norms, int n, const Real& v1, Precision prec);
Real theta_star_constant_term(int n, const Real& v1, Precision prec);

}  // namespace greencm::lattices
