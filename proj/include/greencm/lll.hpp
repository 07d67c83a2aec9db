#pragma once

#include <gmpxx.h>

#include <vector>

namespace greencm {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Integral LLL on linearly independent rows (standard inner product), exact
// in integers throughout. delta is the Lovasz constant, 1/4 < delta <= 1.
IntMatrix lll_reduce(IntMatrix rows, const mpq_class& delta = mpq_class(99, 100));

// Row-style Hermite normal form basis of the Z-span of the given rows; zero
// rows are dropped.
IntMatrix hnf_basis(const IntMatrix& rows);

}  // namespace greencm
