#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qvar::expsums {

/// Units modulo c with their inverses.
class InverseTable {
 public:
  explicit InverseTable(std::int64_t c);
  std::int64_t modulus() const { return c_; }
  const std::vector<std::int64_t>& units() const { return units_; }
  const std::vector<std::int64_t>& inverses() const { return inv_; }

 private:
  std::int64_t c_;
  std::vector<std::int64_t> units_;
  std::vector<std::int64_t> inv_;
};

/// e(x) = exp(2 pi i x).
std::complex<double> e(double x);

/// S(a, b; c) by direct summation over the table's units.
double kloosterman_direct(std::int64_t a, std::int64_t b, const InverseTable& table);
double kloosterman_direct(std::int64_t a, std::int64_t b, std::int64_t c);

/// S(a, b; c1 c2) = S(a c2bar^2, b; c1) S(a c1bar^2, b; c2) for coprime c1, c2.
double kloosterman_crt(std::int64_t a, std::int64_t b, std::int64_t c1, std::int64_t c2);

/// Direct for c <= 1e4, otherwise split into coprime prime-power factors.
double kloosterman(std::int64_t a, std::int64_t b, std::int64_t c);

/// Upper limit for kloosterman_identity_lhs.
inline constexpr int kIdentityMaxModulus = 24;

/// sum over a1, a2, b1, b2 mod c of S(a1(a1+b1), a2(a2+b2); c) e_c(2 a1 a2 + a1 b2 + a2 b1).
double kloosterman_identity_lhs(int c);

}  // namespace qvar::expsums
