#include <cmath>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/simd/kernels.hpp"
#include "qvar/testfn/transforms.hpp"

namespace qvar::testfn {

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / M_PI);

// Gamma(s) cos(pi s / 2) in log form; both factors over/underflow for large |Im s|.
cplx gamma_cos(cplx s) { return std::exp(analytic::log_gamma(s) + analytic::log_sin_pi(0.5 * (s + 1.0))); }

}  // namespace

// With u = t^2 the transform becomes sqrt(2/pi) int h(t) t^w e^{i t^2 v} dt.
cplx hbar(const Bump& h, double v, cplx w, HbarKind kind) {
  const double a = h.support_lo(), b = h.support_hi();
  const int panels = 24 + static_cast<int>(std::ceil(std::abs(v) * (b * b - a * a) / M_PI));
  auto f = [&](double t) -> cplx {
    const cplx amp = h(t) * (w == 0.0 ? cplx(1.0) : std::exp(w * std::log(t)));
    const double ph = t * t * v;
    if (kind == HbarKind::real_part) return amp * std::cos(ph);
    return amp * cplx(std::cos(ph), std::sin(ph));
  };
  return kSqrt2OverPi * quad::integrate(f, a, b, panels);
}

double hbar_zero(const Bump& h) {
  return kSqrt2OverPi * quad::integrate_compensated(h, h.support_lo(), h.support_hi(), 32);
}

cplx hbar_real_mellin(const Bump& h, cplx w, cplx s) {
  const double a = h.support_lo(), b = h.support_hi();
  const cplx inner = quad::integrate(
      [&](double t) { return h(t) * std::exp((w - 2.0 * s) * std::log(t)); }, a, b,
      32 + static_cast<int>(std::ceil(2.0 * std::abs(s.imag()) * std::log(b / a) / M_PI)));
  return gamma_cos(s) * kSqrt2OverPi * inner;
}

cplx hbar_real_mellin_without_power(const Bump& h, cplx w, cplx s) {
  const cplx inner = quad::integrate([&](double t) { return h(t) * std::exp(w * std::log(t)); },
                                     h.support_lo(), h.support_hi(), 32);
  return gamma_cos(s) * kSqrt2OverPi * inner;
}

double hbar_real_from_mellin(const std::function<cplx(cplx)>& transform, double v, double sigma,
                             double height, double step) {
  require(v > 0.0, ErrorKind::domain, "inverse Mellin needs v > 0");
  // (1/2 pi i) int T(s) v^{-s} ds: y^{s} with y = 1/v.
  ContourSpec spec{sigma, height, step};
  return ContourSamples(transform, spec).invert(1.0 / v).value;
}

cplx fourier(const Bump& h, double xi) {
  const double a = h.support_lo(), b = h.support_hi();
  const int panels = 24 + static_cast<int>(std::ceil(2.0 * std::abs(xi) * (b - a)));
  return quad::integrate(
      [&](double x) {
        const double ph = -2.0 * M_PI * x * xi;
        return h(x) * cplx(std::cos(ph), std::sin(ph));
      },
      a, b, panels);
}

double fourier_moment(const Bump& h, int power) {
  const double a = h.support_lo(), b = h.support_hi();
  // Shared node set for h^ over the whole xi range, about two periods per panel.
  constexpr double kMaxXi = 1000.0;
  const auto nodes = quad::composite(a, b, 24 + static_cast<int>(kMaxXi * (b - a) / 2.0));
  std::vector<double> amp(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) amp[i] = nodes.w[i] * h(nodes.x[i]);
  auto integrand = [&](double xi) {
    const auto r = simd::damped_trig_sums(amp, nodes.x, 0.0, -2.0 * M_PI * xi);
    return std::pow(xi, power) * std::hypot(r.cos_sum, r.sin_sum);
  };
  double mass = 0.0;
  for (double v : amp) mass += std::abs(v);
  // Past this level h^ is quadrature noise.
  const double floor = 1e-14 * mass;
  CompensatedSum total;
  double recent = 0.0, recent_peak = 0.0;
  constexpr double kWidth = 0.25;
  int block = 0;
  for (double lo = 0.0; lo < kMaxXi; lo += kWidth) {
    const double piece = quad::integrate(integrand, lo, lo + kWidth, 1, 20);
    total.add(piece);
    recent += piece;
    recent_peak = std::max(recent_peak, piece / (kWidth * std::pow(lo + kWidth, power)));
    if (++block == 8) {
      if (lo > 10.0 && (recent < 1e-10 * total.value() || recent_peak < floor)) return 2.0 * total.value();
      recent = recent_peak = 0.0;
      block = 0;
    }
  }
  raise(ErrorKind::truncation, "Fourier moment did not converge below xi = 1000");
}

}  // namespace qvar::testfn
