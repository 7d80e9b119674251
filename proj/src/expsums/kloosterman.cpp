#include "qvar/expsums/kloosterman.hpp"

#include <cmath>
#include <numeric>

#include "qvar/error.hpp"
#include "qvar/expsums/arithmetic.hpp"
#include "qvar/parallel.hpp"

namespace qvar::expsums {

namespace {

constexpr std::int64_t kCrtThreshold = 10000;

// (x * y) mod c without overflow for c < 2^62.
std::int64_t mulmod(std::int64_t x, std::int64_t y, std::int64_t c) {
  return static_cast<std::int64_t>(static_cast<__int128>(x) * y % c);
}

double realify(std::complex<double> z) {
  require(std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z.real())), ErrorKind::convergence,
          "Kloosterman sum has a non-negligible imaginary part");
  return z.real();
}

}  // namespace

InverseTable::InverseTable(std::int64_t c) : c_(c) {
  require(c >= 1, ErrorKind::domain, "modulus must be positive");
  if (c == 1) {
    units_ = {0};
    inv_ = {0};
    return;
  }
  std::vector<std::int64_t> inv(static_cast<std::size_t>(c), 0);
  for (std::int64_t x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    if (inv[x] == 0) {
      const std::int64_t y = inverse_mod(x, c);
      inv[x] = y;
      inv[y] = x;
    }
    units_.push_back(x);
    inv_.push_back(inv[x]);
  }
}

std::complex<double> e(double x) {
  const double t = 2.0 * M_PI * x;
  return {std::cos(t), std::sin(t)};
}

double kloosterman_direct(std::int64_t a, std::int64_t b, const InverseTable& table) {
  const std::int64_t c = table.modulus();
  const std::int64_t am = mod(a, c), bm = mod(b, c);
  std::complex<double> acc = 0.0;
  const auto& u = table.units();
  const auto& v = table.inverses();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::int64_t r = (mulmod(am, u[i], c) + mulmod(bm, v[i], c)) % c;
    acc += e(static_cast<double>(r) / static_cast<double>(c));
  }
  return realify(acc);
}

double kloosterman_direct(std::int64_t a, std::int64_t b, std::int64_t c) {
  return kloosterman_direct(a, b, InverseTable(c));
}

double kloosterman_crt(std::int64_t a, std::int64_t b, std::int64_t c1, std::int64_t c2) {
  require(std::gcd(c1, c2) == 1, ErrorKind::domain, "CRT split needs coprime moduli");
  const std::int64_t i2 = inverse_mod(c2, c1), i1 = inverse_mod(c1, c2);
  const std::int64_t a1 = mulmod(mod(a, c1), mulmod(i2, i2, c1), c1);
  const std::int64_t a2 = mulmod(mod(a, c2), mulmod(i1, i1, c2), c2);
  return kloosterman(a1, b, c1) * kloosterman(a2, b, c2);
}

double kloosterman(std::int64_t a, std::int64_t b, std::int64_t c) {
  require(c >= 1, ErrorKind::domain, "Kloosterman modulus must be positive");
  if (c <= kCrtThreshold) return kloosterman_direct(a, b, c);
  const auto f = factorize(c);
  if (f.size() == 1) return kloosterman_direct(a, b, c);
  std::int64_t c1 = 1;
  for (int i = 0; i < f.front().second; ++i) c1 *= f.front().first;
  return kloosterman_crt(a, b, c1, c / c1);
}

double kloosterman_identity_lhs(int c) {
  require(c >= 1, ErrorKind::domain, "modulus must be positive");
  require(c <= kIdentityMaxModulus, ErrorKind::cost_guard,
          "identity check is limited to c <= " + std::to_string(kIdentityMaxModulus));
  const InverseTable table(c);
  std::vector<double> s_table(static_cast<std::size_t>(c) * c);
  for (int x = 0; x < c; ++x)
    for (int y = 0; y < c; ++y) s_table[x * c + y] = kloosterman_direct(x, y, table);
  std::vector<std::complex<double>> roots(c);
  for (int r = 0; r < c; ++r) roots[r] = e(static_cast<double>(r) / c);

  const auto partial = parallel_map<std::complex<double>>(c, [&](std::size_t i) {
    const int a1 = static_cast<int>(i);
    std::complex<double> acc = 0.0;
    for (int b1 = 0; b1 < c; ++b1) {
      const int x = a1 * (a1 + b1) % c;
      for (int a2 = 0; a2 < c; ++a2)
        for (int b2 = 0; b2 < c; ++b2) {
          const int y = a2 * (a2 + b2) % c;
          const int phase = (2 * a1 * a2 + a1 * b2 + a2 * b1) % c;
          acc += s_table[x * c + y] * roots[phase];
        }
    }
    return acc;
  });
  std::complex<double> total = 0.0;
  for (const auto& p : partial) total += p;
  return realify(total);
}

}  // namespace qvar::expsums
