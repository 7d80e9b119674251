#include <cmath>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"

namespace qvar::analytic {

double ScaledReal::value() const { return mantissa * std::exp(log_scale); }

namespace {

// (x/2)^n / n! * sum_k (-x^2/4)^k / (k! (n+1)_k); alternating with
// decreasing terms whenever x^2/4 <= n+1.
ScaledReal power_series(int n, double x) {
  const double z = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= -z / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return {sum, n * std::log(0.5 * x) - std::lgamma(n + 1.0)};
}

// Backward recurrence from well above max(n, x), normalized with
// J_0 + 2 sum J_{2k} = 1. Large intermediate values are folded into a
// running log scale.
ScaledReal miller(int n, double x) {
  const double top = std::max<double>(n, x);
  int start = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(40.0 * top));
  start += start & 1;
  const double two_over_x = 2.0 / x;
  double j_next = 0.0;
  double j_cur = 1e-300;
  double log_scale = 0.0;
  double norm = 0.0;
  double captured = 0.0;
  double captured_scale = 0.0;
  for (int k = start; k > 0; --k) {
    const double j_prev = k * two_over_x * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;  // now holds J_{k-1}
    if (std::abs(j_cur) > 1e250) {
      j_cur *= 1e-250;
      j_next *= 1e-250;
      norm *= 1e-250;
      log_scale += 250.0 * std::log(10.0);
    }
    const int idx = k - 1;
    if (idx == n) {
      captured = j_cur;
      captured_scale = log_scale;
    }
    if (idx > 0 && (idx & 1) == 0) norm += 2.0 * j_cur;
  }
  norm += j_cur;
  return {captured / norm, captured_scale - log_scale};
}

}  // namespace

ScaledReal bessel_j_scaled(int order, double x) {
  require(order >= 0 && order <= 2000, ErrorKind::domain, "Bessel order must lie in [0, 2000]");
  require(x > 0.0 && std::isfinite(x), ErrorKind::domain, "Bessel argument must be positive");
  if (0.25 * x * x <= order + 1.0) return power_series(order, x);
  return miller(order, x);
}

}  // namespace qvar::analytic
