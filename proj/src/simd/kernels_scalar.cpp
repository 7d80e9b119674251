#include <cmath>

#include "qvar/simd/kernels.hpp"

namespace qvar::simd::scalar {

TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega) {
  TrigSums out;
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double a = sigma == 0.0 ? amp[j] : amp[j] * std::exp(sigma * x[j]);
    const double arg = omega * x[j];
    out.cos_sum += a * std::cos(arg);
    out.sin_sum += a * std::sin(arg);
  }
  return out;
}

double exp_dot(std::span<const double> amp, std::span<const double> expo) {
  double s = 0.0;
  for (std::size_t j = 0; j < amp.size(); ++j) s += amp[j] * std::exp(expo[j]);
  return s;
}

void exp_into(std::span<const double> expo, std::span<double> out) {
  for (std::size_t j = 0; j < expo.size(); ++j) out[j] = std::exp(expo[j]);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace qvar::simd::scalar
