#pragma once

// Data-parallel inner loops shared by the numeric modules. Each kernel has a
// scalar reference implementation and, where the CPU allows, an AVX2 variant.
// The active variant is picked once at startup and can be overridden with the
// QVAR_SIMD environment variable ("scalar" or "avx2") or set_backend().

#include <span>
#include <string_view>

namespace qvar::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;
bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
void set_backend(Backend b);

struct TrigSums {
  double cos_sum = 0.0;
  double sin_sum = 0.0;
};

/// sum_j amp[j] * exp(sigma*x[j]) * (cos(omega*x[j]), sin(omega*x[j])).
TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega);

/// sum_j amp[j] * exp(expo[j]).
double exp_dot(std::span<const double> amp, std::span<const double> expo);

/// Elementwise out[j] = exp(expo[j]).
void exp_into(std::span<const double> expo, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

// Direct access to each variant, used by the equivalence tests.
namespace scalar {
TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega);
double exp_dot(std::span<const double> amp, std::span<const double> expo);
void exp_into(std::span<const double> expo, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega);
double exp_dot(std::span<const double> amp, std::span<const double> expo);
void exp_into(std::span<const double> expo, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

}  // namespace qvar::simd
