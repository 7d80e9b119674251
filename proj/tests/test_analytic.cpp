#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <mpfr.h>
#include <random>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"

using namespace qvar;
using namespace qvar::analytic;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// J_order(x) * exp(-log_scale) from the power series at 300 bits.
double bessel_series(int order, double x, double log_scale) {
  mpfr_t term, sum, half_sq, tmp;
  mpfr_inits2(300, term, sum, half_sq, tmp, nullptr);
  mpfr_set_d(half_sq, x / 2.0, MPFR_RNDN);
  mpfr_sqr(half_sq, half_sq, MPFR_RNDN);
  // leading term (x/2)^order / order!
  mpfr_set_d(term, x / 2.0, MPFR_RNDN);
  mpfr_pow_ui(term, term, static_cast<unsigned long>(order), MPFR_RNDN);
  mpfr_fac_ui(tmp, static_cast<unsigned long>(order), MPFR_RNDN);
  mpfr_div(term, term, tmp, MPFR_RNDN);
  mpfr_set(sum, term, MPFR_RNDN);
  for (long j = 1; j < 400; ++j) {
    mpfr_mul(term, term, half_sq, MPFR_RNDN);
    mpfr_div_si(term, term, -j * (j + order), MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
  }
  mpfr_set_d(tmp, -log_scale, MPFR_RNDN);
  mpfr_exp(tmp, tmp, MPFR_RNDN);
  mpfr_mul(sum, sum, tmp, MPFR_RNDN);
  const double out = mpfr_get_d(sum, MPFR_RNDN);
  mpfr_clears(term, sum, half_sq, tmp, nullptr);
  return out;
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("gamma at special points") {
  CHECK(std::abs(analytic::gamma(1.0) - 1.0) < 1e-12);
  CHECK(std::abs(analytic::gamma(0.5) - std::sqrt(pi)) < 1e-12 * std::sqrt(pi));
  const double h = 1e-5;
  const cplx slope = (analytic::gamma(0.5 + h) - analytic::gamma(0.5 - h)) / (2.0 * h);
  CHECK(std::abs(slope - std::sqrt(pi) * (-euler_gamma - 2.0 * std::log(2.0))) < 1e-6);
}

TEST_CASE("gamma on the real line against the C library") {
  for (double x = 0.05; x < 150.0; x *= 1.37) CHECK(rel(analytic::gamma(x), std::tgamma(x)) < 1e-12);
}

TEST_CASE("gamma modulus on vertical lines") {
  // |Gamma(1/2+it)|^2 = pi/cosh(pi t), |Gamma(1+it)|^2 = pi t/sinh(pi t)
  for (double t = 0.25; t <= 200.0; t *= 1.6) {
    const double lhs_half = 2.0 * log_gamma({0.5, t}).real();
    const double rhs_half = std::log(pi) - pi * t - std::log1p(std::exp(-2.0 * pi * t)) + std::log(2.0);
    CHECK(std::abs(lhs_half - rhs_half) < 1e-11 * std::max(1.0, std::abs(rhs_half)));
    const double lhs_one = 2.0 * log_gamma({1.0, t}).real();
    const double rhs_one = std::log(2.0 * pi * t) - pi * t - std::log1p(-std::exp(-2.0 * pi * t));
    CHECK(std::abs(lhs_one - rhs_one) < 1e-11 * std::max(1.0, std::abs(rhs_one)));
  }
}

TEST_CASE("gamma recurrence and reflection") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-20.0, 40.0), im(-60.0, 60.0);
  for (int i = 0; i < 200; ++i) {
    const cplx s(re(rng), im(rng));
    const cplx step = log_gamma(s + 1.0) - log_gamma(s) - std::log(s);
    const double wrapped = std::remainder(step.imag(), 2.0 * pi);
    CHECK(std::abs(step.real()) < 1e-10);
    CHECK(std::abs(wrapped) < 1e-9);
    const cplx refl = log_gamma(s) + log_gamma(1.0 - s) + log_sin_pi(s) - std::log(pi);
    CHECK(std::abs(refl.real()) < 1e-9);
    CHECK(std::abs(std::remainder(refl.imag(), 2.0 * pi)) < 1e-9);
  }
}

TEST_CASE("log-gamma addition over weights") {
  for (int k = 2; k <= 400; ++k) {
    const double lhs = log_gamma(static_cast<double>(k + 1)).real() - log_gamma(static_cast<double>(k)).real();
    CHECK(std::abs(lhs - std::log(static_cast<double>(k))) < 1e-13 * std::max(1.0, std::log(k)));
  }
}

TEST_CASE("gamma poles raise") {
  for (double s : {0.0, -1.0, -3.0}) {
    try {
      (void)analytic::gamma(s);
      FAIL("expected a pole error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::pole);
    }
  }
}

TEST_CASE("zeta special values") {
  CHECK(rel(zeta(2.0), pi * pi / 6.0) < 1e-14);
  CHECK(rel(zeta(4.0), std::pow(pi, 4) / 90.0) < 1e-14);
  CHECK(rel(zeta(0.0), -0.5) < 1e-14);
  CHECK(rel(zeta(-1.0), -1.0 / 12.0) < 1e-13);
  const double h = 1e-6;
  CHECK(std::abs(zeta(1.0 + h).real() - 1.0 / h - euler_gamma) < 1e-4);
  CHECK(std::abs(zeta({0.5, 14.134725141734693790})) < 1e-9);
}

TEST_CASE("zeta pole raises") {
  try {
    (void)zeta(1.0);
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
  }
}

TEST_CASE("zeta on the real line against boost") {
  for (double x : {-7.5, -2.5, -0.3, 0.3, 0.7, 1.3, 2.5, 3.0, 6.5, 20.0})
    CHECK(rel(zeta(x), boost::math::zeta(x)) < 1e-12);
}

TEST_CASE("zeta routes agree across the critical strip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(-50.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    const cplx s(re(rng), im(rng));
    if (std::abs(s - 1.0) < 0.1) continue;
    CHECK(rel(zeta_euler_maclaurin(s), zeta_reflected(s)) < 1e-9);
  }
}

TEST_CASE("bessel at small argument") {
  CHECK(std::abs(bessel_j_scaled(0, 1e-300).value() - 1.0) < 1e-15);
  CHECK_THROWS_AS(bessel_j_scaled(5, 0.0), Error);
}

TEST_CASE("bessel against a high-precision power series") {
  for (int order : {0, 1, 11, 23, 59, 200, 1000}) {
    for (double x : {0.5, 1.0, 7.0, 10.0, 25.0}) {
      const auto j = bessel_j_scaled(order, x);
      const double ref = bessel_series(order, x, j.log_scale);
      CHECK(std::abs(j.mantissa - ref) < 1e-12 * std::abs(ref) + 1e-14);
    }
  }
}

TEST_CASE("bessel against boost for moderate order") {
  for (int order = 0; order <= 120; order += 7)
    for (double x = 0.5; x < 400.0; x *= 1.9) {
      const double ref = boost::math::cyl_bessel_j(order, x);
      if (std::abs(ref) < 1e-250) continue;
      CHECK(std::abs(bessel_j_scaled(order, x).value() - ref) < 1e-12 * std::max(std::abs(ref), 1e-3));
    }
}

TEST_CASE("bessel three-term recurrence") {
  for (int i = 0; i < 50; ++i) {
    const double x = 5.0 + 0.3 * i;
    const double lhs = bessel_j_scaled(19, x).value() + bessel_j_scaled(21, x).value();
    const double rhs = 2.0 * 20 / x * bessel_j_scaled(20, x).value();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

}
