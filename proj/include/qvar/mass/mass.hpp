#pragma once

#include <string>

#include "qvar/forms/eigenform.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/testfn/bump.hpp"

namespace qvar::mass {

/// Smallest N with sum_{n>N} (4 pi n)^{(k-1)/2} e^{-2 pi n y0} below
/// rel_tol times the partial sum, y0 = lower end of supp psi.
struct FourierCut {
  int n = 0;
  double relative_tail = 0.0;
};
FourierCut fourier_truncation(int k, const testfn::Bump& psi, double rel_tol = 1e-12);

/// mu_f(psi) = int |f(iy)|^2 y^k psi(y) dy/y for the L2-normalized f.
struct MuResult {
  double value = 0.0;
  double quadrature_delta = 0.0;  // change under the last panel doubling
  double relative_tail = 0.0;
  int truncation = 0;
  quad::NodeSet nodes;
};
MuResult mu_detail(const forms::Eigenform& f, const testfn::Bump& psi);
double mu(const forms::Eigenform& f, const testfn::Bump& psi);

/// Same integral with tanh-sinh quadrature.
double mu_tanh_sinh(const forms::Eigenform& f, const testfn::Bump& psi);

/// E(psi) = (3/pi) int psi dy/y.
double expected(const testfn::Bump& psi);

/// Pair expansion of mu on the node set of mu_detail: off-diagonal (n != m)
/// and diagonal (n = m) parts, plus the sum of absolute off-diagonal pairs.
struct PairSplit {
  double off_diagonal = 0.0;
  double diagonal = 0.0;
  double abs_off_diagonal = 0.0;
};
PairSplit pair_split(const forms::Eigenform& f, const testfn::Bump& psi, const MuResult& mu);
double s_psi_direct(const forms::Eigenform& f, const testfn::Bump& psi);

/// (pi / 2L) sum_{l != 0, |l| <= l_max} sum_n lambda(n) lambda(n+l) / sqrt(n(n+l))
///   * exp(-k l^2 / (2 (2n+l)^2)) psi(k / (2 pi (2n+l))).
struct ShiftedApprox {
  double value = 0.0;
  double positive_shifts = 0.0;
  double negative_shifts = 0.0;
  double tail_bound = 0.0;  // sum of |terms| with |l| > l_max
  int l_max = 0;
};
ShiftedApprox s_psi_approx_detail(const forms::Eigenform& f, const testfn::Bump& psi);
double s_psi_approx(const forms::Eigenform& f, const testfn::Bump& psi);

struct MassReport {
  int k = 0;
  int form_index = 0;
  double mu = 0.0;
  double expected = 0.0;
  double s_direct = 0.0;
  double e_residual = 0.0;
  double diagonal = 0.0;
  double l_sym2 = 0.0;
  double fourier_tail = 0.0;
  double quadrature_delta = 0.0;
  std::string psi_id;
};

MassReport mass_report(const forms::Eigenform& f, const testfn::Bump& psi);

}  // namespace qvar::mass
