#pragma once

#include <gmpxx.h>

#include <vector>

namespace qvar::forms {

/// Exact q-expansion sum_{n=0}^{truncation} a(n) q^n.
struct QExpansion {
  int weight = 0;
  int truncation = 0;
  std::vector<mpz_class> coeffs;  // size truncation + 1

  const mpz_class& operator[](int n) const { return coeffs[static_cast<std::size_t>(n)]; }
};

int cusp_dimension(int k);

QExpansion eisenstein_e4(int truncation);
QExpansion eisenstein_e6(int truncation);
QExpansion delta(int truncation);

/// Product truncated at min of the two truncations (or `truncation` if smaller).
QExpansion multiply(const QExpansion& a, const QExpansion& b, int truncation);

/// Echelonized integral basis of S_k: b_i(j) = delta_ij for 1 <= i, j <= dim.
std::vector<QExpansion> victor_miller_basis(int k, int truncation);

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// a_{T_n f}(m) for m = 0..m_max.
std::vector<mpz_class> hecke_apply(const QExpansion& f, int n, int m_max);

/// M[i][j] = a_{T_n b_i}(j + 1); an eigenform's coordinate row vector c
/// satisfies c M = a_f(n) c.
RationalMatrix hecke_matrix(const std::vector<QExpansion>& basis, int n);

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);

/// Coefficients of det(x I - M), constant term first.
std::vector<mpq_class> characteristic_polynomial(const RationalMatrix& m);

}  // namespace qvar::forms
