#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qvar::expsums {

enum class ArithmeticKind { phi, divisor_count, gcd };

/// Trial-division factorization, n <= 1e12; (prime, exponent) ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);
std::int64_t divisor_count(std::int64_t n);
std::int64_t gcd(std::int64_t a, std::int64_t b);

/// phi(n), d(n), or gcd(n, other).
std::int64_t arithmetic(ArithmeticKind kind, std::int64_t n, std::int64_t other = 0);

/// a mod c in [0, c).
inline std::int64_t mod(std::int64_t a, std::int64_t c) {
  const std::int64_t r = a % c;
  return r < 0 ? r + c : r;
}

/// Inverse of a modulo c; requires gcd(a, c) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t c);

}  // namespace qvar::expsums
