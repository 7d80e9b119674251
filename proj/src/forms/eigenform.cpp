#include "qvar/forms/eigenform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mpreal.hpp"
#include "qvar/error.hpp"

namespace qvar::forms {

using detail::MpReal;

double Eigenform::lambda_at(int n) const {
  require(n >= 1 && n < static_cast<int>(lambda.size()), ErrorKind::missing_data,
          "lambda(" + std::to_string(n) + ") beyond stored eigen-data");
  return lambda[static_cast<std::size_t>(n)];
}

int default_truncation(int k) { return std::max(2000, 8 * k); }

namespace {

constexpr double kCollisionGap = 1e-8;

std::size_t max_bits(const std::vector<QExpansion>& basis) {
  std::size_t bits = 1;
  for (const auto& b : basis)
    for (const auto& c : b.coeffs) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

// Value, first and second derivative of a polynomial (constant term first).
void evaluate(const std::vector<MpReal>& c, const MpReal& x, MpReal& p, MpReal& dp, MpReal& ddp) {
  p = c.back();
  mpfr_set_zero(dp.get(), 1);
  mpfr_set_zero(ddp.get(), 1);
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    ddp = ddp * x + dp;
    dp = dp * x + p;
    p = p * x + c[i];
  }
  mpfr_mul_2ui(ddp.get(), ddp.get(), 1, MPFR_RNDN);
}

// Laguerre iteration; converges from any start when every root is real.
MpReal laguerre(const std::vector<MpReal>& c, MpReal x, mpfr_prec_t prec) {
  const double n = static_cast<double>(c.size() - 1);
  MpReal p(prec), dp(prec), ddp(prec), g(prec), h(prec), disc(prec), den(prec), alt(prec), step(prec);
  for (int iter = 0; iter < 400; ++iter) {
    evaluate(c, x, p, dp, ddp);
    if (p.is_zero()) return x;
    g = dp / p;
    h = g * g - ddp / p;
    // disc = (n - 1) (n h - g^2), clamped at zero
    mpfr_mul_d(disc.get(), h.get(), n, MPFR_RNDN);
    disc -= g * g;
    mpfr_mul_d(disc.get(), disc.get(), n - 1.0, MPFR_RNDN);
    if (mpfr_sgn(disc.get()) < 0) mpfr_set_zero(disc.get(), 1);
    mpfr_sqrt(disc.get(), disc.get(), MPFR_RNDN);
    den = g + disc;
    alt = g - disc;
    if (alt.cmpabs(den) > 0) den = alt;
    if (den.is_zero()) break;
    mpfr_d_div(step.get(), n, den.get(), MPFR_RNDN);
    x -= step;
    MpReal tol = x.abs();
    mpfr_mul_2si(tol.get(), tol.get(), -static_cast<long>(prec) + 16, MPFR_RNDN);
    if (step.cmpabs(tol) <= 0) return x;
  }
  return x;
}

// All (real) roots of the characteristic polynomial, ascending. Roots are
// extracted one at a time with deflation and polished on the full polynomial.
std::vector<MpReal> real_roots(const std::vector<mpq_class>& poly, mpfr_prec_t prec) {
  std::vector<MpReal> full;
  for (const auto& q : poly) full.emplace_back(prec, q);
  std::vector<MpReal> work = full;
  std::vector<MpReal> roots;
  while (work.size() > 1) {
    MpReal r = laguerre(work, MpReal(prec), prec);
    r = laguerre(full, r, prec);
    roots.push_back(r);
    // synthetic division by (x - r)
    std::vector<MpReal> q(work.size() - 1, MpReal(prec));
    MpReal carry = work.back();
    for (std::size_t i = work.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = work[i] + carry * r;
    }
    work = std::move(q);
  }
  std::sort(roots.begin(), roots.end(),
            [](const MpReal& a, const MpReal& b) { return mpfr_less_p(a.get(), b.get()) != 0; });
  return roots;
}

// Solves c (M - lambda I) = 0 with c_1 = 1 by elimination on the
// transposed system, pivoting over all d rows.
std::vector<MpReal> left_eigenvector(const RationalMatrix& m, const MpReal& lam, mpfr_prec_t prec) {
  const std::size_t d = m.size();
  std::vector<std::vector<MpReal>> a;  // rows: equations, columns: c_2..c_d | rhs
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<MpReal> row;
    for (std::size_t r = 1; r < d; ++r) {
      MpReal v(prec, m[r][col]);
      if (r == col) v -= lam;
      row.push_back(v);
    }
    MpReal rhs(prec, m[0][col]);
    if (col == 0) rhs -= lam;
    MpReal neg(prec);
    neg -= rhs;
    row.push_back(neg);
    a.push_back(std::move(row));
  }
  const std::size_t unknowns = d - 1;
  std::vector<bool> used(d, false);
  std::vector<std::size_t> pivot_row(unknowns);
  for (std::size_t j = 0; j < unknowns; ++j) {
    std::size_t best = d;
    for (std::size_t r = 0; r < d; ++r) {
      if (used[r]) continue;
      if (best == d || a[r][j].cmpabs(a[best][j]) > 0) best = r;
    }
    used[best] = true;
    pivot_row[j] = best;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == best || a[r][j].is_zero()) continue;
      MpReal f = a[r][j] / a[best][j];
      for (std::size_t c = j; c <= unknowns; ++c) a[r][c] -= f * a[best][c];
    }
  }
  std::vector<MpReal> c;
  c.emplace_back(prec, 1.0);
  for (std::size_t j = 0; j < unknowns; ++j) c.push_back(a[pivot_row[j]][unknowns] / a[pivot_row[j]][j]);
  return c;
}

Eigenform normalize(int k, const std::vector<QExpansion>& basis, const std::vector<MpReal>& coords,
                    mpfr_prec_t prec) {
  const int n_max = basis.front().truncation;
  Eigenform f;
  f.weight = k;
  f.lambda.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (const auto& c : coords) f.coords.push_back(c.to_double());
  MpReal a(prec), term(prec), scale(prec), logn(prec);
  for (int n = 1; n <= n_max; ++n) {
    mpfr_set_zero(a.get(), 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const mpz_class& b = basis[i][n];
      if (sgn(b) == 0) continue;
      mpfr_mul_z(term.get(), coords[i].get(), b.get_mpz_t(), MPFR_RNDN);
      a += term;
    }
    mpfr_set_ui(logn.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_log(logn.get(), logn.get(), MPFR_RNDN);
    mpfr_mul_d(scale.get(), logn.get(), -0.5 * (k - 1), MPFR_RNDN);
    mpfr_exp(scale.get(), scale.get(), MPFR_RNDN);
    a *= scale;
    f.lambda[static_cast<std::size_t>(n)] = a.to_double();
  }
  return f;
}

// Leaves the L-value fields at zero when the expansion is too short to
// evaluate L(1, sym^2 f).
void attach_l_values(Eigenform& f) {
  try {
    f.l_sym2 = l_sym2_at_1(f);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::missing_data) throw;
    return;
  }
  f.log_a1_sq = std::log(2.0 * M_PI * M_PI) - std::lgamma(static_cast<double>(f.weight)) - std::log(f.l_sym2);
  f.a1_sq = std::exp(f.log_a1_sq);
}

}  // namespace

WeightData eigenforms_from_basis(int k, const std::vector<QExpansion>& basis) {
  WeightData out;
  out.weight = k;
  if (basis.empty()) return out;
  out.truncation = basis.front().truncation;
  const std::size_t d = basis.size();
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(2 * max_bits(basis) + 256);

  if (d == 1) {
    std::vector<MpReal> one;
    one.emplace_back(prec, 1.0);
    out.forms.push_back(normalize(k, basis, one, prec));
  } else {
    const RationalMatrix t2 = hecke_matrix(basis, 2);
    const auto poly = characteristic_polynomial(t2);
    const double norm2 = std::pow(2.0, 0.5 * (k - 1));
    std::vector<double> lambda2;
    for (const MpReal& root : real_roots(poly, prec)) {
      lambda2.push_back(root.to_double() / norm2);
      const auto coords = left_eigenvector(t2, root, prec);
      out.forms.push_back(normalize(k, basis, coords, prec));
    }
    for (std::size_t i = 1; i < lambda2.size(); ++i)
      require(std::abs(lambda2[i] - lambda2[i - 1]) >= kCollisionGap, ErrorKind::eigenvalue_collision,
              "two Hecke eigenvalues lambda(2) coincide at weight " + std::to_string(k));
  }
  if (out.forms.size() > 1)
    std::sort(out.forms.begin(), out.forms.end(),
              [](const Eigenform& a, const Eigenform& b) { return a.lambda[2] < b.lambda[2]; });
  for (std::size_t i = 0; i < out.forms.size(); ++i) {
    out.forms[i].conjugacy_id = static_cast<int>(i);
    attach_l_values(out.forms[i]);
  }
  return out;
}

WeightData eigenforms(int k, int truncation) {
  require(k >= 12 && k % 2 == 0, ErrorKind::domain, "weight must be even and at least 12");
  WeightData d = eigenforms_from_basis(k, victor_miller_basis(k, truncation));
  d.truncation = truncation;
  return d;
}

}  // namespace qvar::forms
