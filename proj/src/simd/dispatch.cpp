#include <cstdlib>
#include <string>

#include "qvar/error.hpp"
#include "qvar/simd/kernels.hpp"

namespace qvar::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("QVAR_SIMD")) {
    if (std::string(env) == "scalar") return Backend::scalar;
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend& current() noexcept {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) noexcept {
  if (b == Backend::scalar) return true;
  return avx2::compiled() && cpu_has_avx2();
}

Backend active_backend() noexcept { return current(); }

void set_backend(Backend b) {
  require(backend_supported(b), ErrorKind::domain,
          "SIMD backend " + std::string(backend_name(b)) + " not supported on this CPU");
  current() = b;
}

TrigSums damped_trig_sums(std::span<const double> amp, std::span<const double> x, double sigma,
                          double omega) {
  return current() == Backend::avx2 ? avx2::damped_trig_sums(amp, x, sigma, omega)
                                    : scalar::damped_trig_sums(amp, x, sigma, omega);
}

double exp_dot(std::span<const double> amp, std::span<const double> expo) {
  return current() == Backend::avx2 ? avx2::exp_dot(amp, expo) : scalar::exp_dot(amp, expo);
}

void exp_into(std::span<const double> expo, std::span<double> out) {
  if (current() == Backend::avx2)
    avx2::exp_into(expo, out);
  else
    scalar::exp_into(expo, out);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return current() == Backend::avx2 ? avx2::dot(a, b) : scalar::dot(a, b);
}

}  // namespace qvar::simd
