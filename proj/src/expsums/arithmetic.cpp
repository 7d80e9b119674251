#include "qvar/expsums/arithmetic.hpp"

#include <numeric>
#include <tuple>

#include "qvar/error.hpp"

namespace qvar::expsums {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  require(n >= 1, ErrorKind::domain, "factorize needs n >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

std::int64_t divisor_count(std::int64_t n) {
  std::int64_t r = 1;
  for (const auto& [p, e] : factorize(n)) r *= e + 1;
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t arithmetic(ArithmeticKind kind, std::int64_t n, std::int64_t other) {
  require(n >= 1, ErrorKind::domain, "arithmetic functions need n >= 1");
  switch (kind) {
    case ArithmeticKind::phi: return euler_phi(n);
    case ArithmeticKind::divisor_count: return divisor_count(n);
    case ArithmeticKind::gcd: return gcd(n, other);
  }
  return 0;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t c) {
  std::int64_t r0 = mod(a, c), r1 = c, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  require(r0 == 1 || c == 1, ErrorKind::domain, "no inverse modulo c");
  return mod(s0, c);
}

}  // namespace qvar::expsums
