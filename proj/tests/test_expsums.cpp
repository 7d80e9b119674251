#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "qvar/error.hpp"
#include "qvar/expsums/arithmetic.hpp"
#include "qvar/expsums/kloosterman.hpp"

using namespace qvar;
using namespace qvar::expsums;

namespace {

// S(a, b; c) straight from the definition, inverses found by search.
double naive_kloosterman(long a, long b, long c) {
  double s = 0.0;
  for (long x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    long inv = 0;
    while ((x * inv) % c != 1 % c) ++inv;
    s += std::cos(2 * M_PI * static_cast<double>(((a * x + b * inv) % c + c) % c) / c);
  }
  return s;
}

double naive_identity_lhs(long c) {
  std::complex<double> total = 0.0;
  for (long a1 = 0; a1 < c; ++a1)
    for (long a2 = 0; a2 < c; ++a2)
      for (long b1 = 0; b1 < c; ++b1)
        for (long b2 = 0; b2 < c; ++b2) {
          const double k = naive_kloosterman(a1 * (a1 + b1), a2 * (a2 + b2), c);
          const double ph = 2 * M_PI * static_cast<double>((2 * a1 * a2 + a1 * b2 + a2 * b1) % c) / c;
          total += k * std::polar(1.0, ph);
        }
  return total.real();
}

double identity_rhs(long c) {
  return std::pow(static_cast<double>(c), 3) * static_cast<double>(euler_phi(c));
}

}  // namespace

TEST_SUITE("expsums") {

TEST_CASE("arithmetic functions") {
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(97) == 96);
  CHECK(euler_phi(1) == 1);
  CHECK(divisor_count(12) == 6);
  CHECK(divisor_count(1) == 1);
  CHECK(gcd(12, 18) == 6);
  CHECK(arithmetic(ArithmeticKind::phi, 12) == 4);
  CHECK(arithmetic(ArithmeticKind::divisor_count, 12) == 6);
  CHECK(arithmetic(ArithmeticKind::gcd, 12, 18) == 6);
  for (long a = 1; a < 50; ++a)
    if (std::gcd(a, 97L) == 1) CHECK(mod(a * inverse_mod(a, 97), 97) == 1);
  CHECK(mod(-3, 7) == 4);
}

TEST_CASE("kloosterman small cases") {
  CHECK(kloosterman(1, 1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(kloosterman(1, 1, 2) - 1.0) < 1e-12);
  CHECK(std::abs(kloosterman(0, 1, 2) - (-1.0)) < 1e-12);  // Ramanujan sum mu(2)
  CHECK(std::abs(kloosterman(0, 0, 12) - euler_phi(12)) < 1e-12);
  for (long c : {3L, 7L, 10L, 30L})
    for (long a = 0; a < 6; ++a)
      for (long b = 0; b < 6; ++b) CHECK(std::abs(kloosterman(a, b, c) - naive_kloosterman(a, b, c)) < 1e-10);
}

TEST_CASE("kloosterman symmetry and Weil bound") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> cd(1, 5000), ad(-100000, 100000);
  for (int i = 0; i < 500; ++i) {
    const long c = cd(rng), a = ad(rng), b = ad(rng);
    const double s = kloosterman(a, b, c);
    CHECK(std::abs(s - kloosterman(b, a, c)) < 1e-9);
    const double bound = static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(std::gcd(std::gcd(a, b), c))) *
                         std::sqrt(static_cast<double>(c));
    CHECK(std::abs(s) <= bound + 1e-9);
  }
}

TEST_CASE("kloosterman twisted multiplicativity") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> cd(2, 300), ad(-1000, 1000);
  int done = 0;
  while (done < 100) {
    const long c1 = cd(rng), c2 = cd(rng);
    if (std::gcd(c1, c2) != 1) continue;
    const long a = ad(rng), b = ad(rng);
    CHECK(std::abs(kloosterman_crt(a, b, c1, c2) - kloosterman_direct(a, b, c1 * c2)) < 1e-9);
    ++done;
  }
  CHECK(std::abs(kloosterman(3, 5, 20011 * 2) - kloosterman_direct(3, 5, 20011 * 2)) < 1e-8);
}

TEST_CASE("identity sum against brute force") {
  for (int c : {1, 2, 3, 4, 6}) {
    const double naive = naive_identity_lhs(c);
    CHECK(std::abs(kloosterman_identity_lhs(c) - naive) < 1e-8 * std::max(1.0, std::abs(naive)));
  }
  CHECK(std::abs(kloosterman_identity_lhs(2) - 8.0) < 1e-9);
  for (int c = 1; c <= 8; ++c) {
    const double rhs = identity_rhs(c);
    CHECK(std::abs(kloosterman_identity_lhs(c) - rhs) < 1e-6 * rhs);
  }
}

TEST_CASE("identity sum cost guard") {
  try {
    (void)kloosterman_identity_lhs(kIdentityMaxModulus + 1);
    FAIL("expected a cost-guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cost_guard);
  }
}

}
