#include "greencm/lll.hpp"
#include "greencm/errors.hpp"

namespace greencm {

namespace {

mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Nearest integer to a / b for b > 0.
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
  mpz_class num = 2 * a + b, den = 2 * b, q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

}  // namespace

// Cohen, A Course in Computational Algebraic Number Theory, Algorithm 2.6.7.
IntMatrix lll_reduce(IntMatrix b, const mpq_class& delta) {
  const int n = int(b.size());
  if (n <= 1) return b;
  const mpz_class dn = delta.get_num(), dd = delta.get_den();
  std::vector<mpz_class> d(n + 1);
  std::vector<std::vector<mpz_class>> lam(n, std::vector<mpz_class>(n));
  d[0] = 1;  // d[i+1] belongs to row i
  d[1] = dot(b[0], b[0]);
  if (d[1] == 0) throw DomainError("lll_reduce: rows are linearly dependent");
  int k = 1, kmax = 0;

  auto red = [&](int kk, int l) {
    if (2 * abs(lam[kk][l]) > d[l + 1]) {
      mpz_class q = round_div(lam[kk][l], d[l + 1]);
      for (size_t c = 0; c < b[kk].size(); ++c) b[kk][c] -= q * b[l][c];
      lam[kk][l] -= q * d[l + 1];
      for (int i = 0; i < l; ++i) lam[kk][i] -= q * lam[l][i];
    }
  };
  auto swap = [&](int kk) {
    std::swap(b[kk], b[kk - 1]);
    for (int j = 0; j < kk - 1; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
    mpz_class l = lam[kk][kk - 1];
    mpz_class B = (d[kk - 1] * d[kk + 1] + l * l) / d[kk];
    for (int i = kk + 1; i <= kmax; ++i) {
      mpz_class t = lam[i][kk];
      lam[i][kk] = (d[kk + 1] * lam[i][kk - 1] - l * t) / d[kk];
      lam[i][kk - 1] = (B * t + l * lam[i][kk]) / d[kk + 1];
    }
    d[kk] = B;
  };

  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (int j = 0; j <= k; ++j) {
        mpz_class u = dot(b[k], b[j]);
        for (int i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
        if (j < k) lam[k][j] = u;
        else {
          d[k + 1] = u;
          if (u == 0) throw DomainError("lll_reduce: rows are linearly dependent");
        }
      }
    }
    red(k, k - 1);
    if (dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] * lam[k][k - 1]) {
      swap(k);
      if (k > 1) --k;
    } else {
      for (int l = k - 2; l >= 0; --l) red(k, l);
      ++k;
    }
  }
  return b;
}

IntMatrix hnf_basis(const IntMatrix& rows) {
  if (rows.empty()) return {};
  const size_t m = rows[0].size();
  // pivot[c] holds the basis row whose leading entry sits in column c
  std::vector<std::vector<mpz_class>> pivot(m);
  std::vector<bool> has(m, false);
  for (auto v : rows) {
    for (size_t c = 0; c < m; ++c) {
      if (v[c] == 0) continue;
      if (!has[c]) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        pivot[c] = v;
        has[c] = true;
        break;
      }
      // combine pivot row and v so that column c becomes gcd in the pivot and 0 in v
      std::vector<mpz_class>& p = pivot[c];
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p[c].get_mpz_t(), v[c].get_mpz_t());
      mpz_class a = p[c] / g, bb = v[c] / g;
      std::vector<mpz_class> np(m), nv(m);
      for (size_t j = 0; j < m; ++j) {
        np[j] = s * p[j] + t * v[j];
        nv[j] = a * v[j] - bb * p[j];
      }
      p = np;
      v = nv;
    }
  }
  IntMatrix out;
  for (size_t c = 0; c < m; ++c) {
    if (!has[c]) continue;
    // reduce entries above the pivots
    for (size_t c2 = c + 1; c2 < m; ++c2) {
      if (!has[c2]) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), pivot[c][c2].get_mpz_t(), pivot[c2][c2].get_mpz_t());
      for (size_t j = 0; j < m; ++j) pivot[c][j] -= q * pivot[c2][j];
    }
  }
  for (size_t c = 0; c < m; ++c)
    if (has[c]) out.push_back(pivot[c]);
  return out;
}

}  // namespace greencm
