#include <cmath>
#include <string>

#include "qvar/error.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/simd/kernels.hpp"
#include "qvar/testfn/transforms.hpp"

namespace qvar::testfn {

namespace {

struct LogSupport {
  double lo, hi;  // u-range of psi(e^{-u})
};

LogSupport log_support(const Bump& psi) { return {-std::log(psi.support_hi()), -std::log(psi.support_lo())}; }

int panels_for(double height, double width) {
  return 32 + 2 * static_cast<int>(std::ceil(height * width / M_PI));
}

template <class Weight>
cplx mellin_with(const Bump& psi, cplx s, Weight&& weight) {
  const auto [a, b] = log_support(psi);
  auto f = [&](double u) { return psi(std::exp(-u)) * weight(u) * std::exp(s * u); };
  int panels = panels_for(std::abs(s.imag()), b - a);
  cplx prev = quad::integrate(f, a, b, panels);
  for (int iter = 0; iter < 8; ++iter) {
    panels *= 2;
    const cplx cur = quad::integrate(f, a, b, panels);
    if (std::abs(cur - prev) < 1e-14 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  raise(ErrorKind::convergence, "Mellin quadrature did not settle");
}

}  // namespace

cplx mellin(const Bump& psi, cplx s) {
  return mellin_with(psi, s, [](double) { return 1.0; });
}

cplx mellin_derivative(const Bump& psi, cplx s) {
  return mellin_with(psi, s, [](double u) { return u; });
}

MellinSampler::MellinSampler(const Bump& psi, double max_height) : max_height_(max_height) {
  const auto [a, b] = log_support(psi);
  const auto nodes = quad::composite(a, b, 2 * panels_for(max_height, b - a));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = psi(std::exp(-nodes.x[i]));
    if (v == 0.0) continue;
    u_.push_back(nodes.x[i]);
    amp_.push_back(nodes.w[i] * v);
    uamp_.push_back(nodes.w[i] * v * nodes.x[i]);
  }
}

cplx MellinSampler::operator()(cplx s) const {
  const auto r = simd::damped_trig_sums(amp_, u_, s.real(), s.imag());
  return {r.cos_sum, r.sin_sum};
}

cplx MellinSampler::derivative(cplx s) const {
  const auto r = simd::damped_trig_sums(uamp_, u_, s.real(), s.imag());
  return {r.cos_sum, r.sin_sum};
}

void ContourSpec::validate() const {
  require(step > 0.0, ErrorKind::domain, "contour step must be positive");
  require(height >= 10.0 * step, ErrorKind::domain, "contour height must be at least 10 steps");
}

ContourSpec default_contour(const Bump& psi, double sigma, double y_min, double tail_tol) {
  ContourSpec spec;
  spec.sigma = sigma;
  spec.step = 0.05;
  if (y_min < 1.0) spec.step = std::min(0.05, 1.0 / (4.0 * std::log(1.0 / y_min)));
  constexpr double kMaxHeight = 2000.0;
  const MellinSampler sampler(psi, kMaxHeight + 10.0);
  for (double t = 10.0;; t += 5.0) {
    require(t < kMaxHeight, ErrorKind::truncation, "Mellin transform does not decay on the contour");
    double worst = 0.0;
    for (int j = 0; j <= 10; ++j) worst = std::max(worst, std::abs(sampler(cplx(sigma, t + 0.5 * j))));
    if (worst * t / (3.0 * M_PI) < tail_tol) {
      spec.height = t;
      return spec;
    }
  }
}

ContourSamples::ContourSamples(const std::function<cplx(cplx)>& f, const ContourSpec& spec) : spec_(spec) {
  spec.validate();
  const int n = static_cast<int>(std::floor(spec.height / spec.step + 1e-9));
  for (int j = 0; j <= n; ++j) {
    const double t = j * spec.step;
    const cplx v = f(cplx(spec.sigma, t));
    const double half = j == 0 ? 0.5 : 1.0;
    t_.push_back(t);
    re_.push_back(half * v.real());
    im_.push_back(half * v.imag());
  }
  tail_magnitude_ = std::abs(f(cplx(spec.sigma, n * spec.step)));
}

InversionResult ContourSamples::invert(double y) const {
  require(y > 0.0, ErrorKind::domain, "Mellin inversion needs y > 0");
  const double omega = std::log(y);
  const auto c = simd::damped_trig_sums(re_, t_, 0.0, omega);
  const auto d = simd::damped_trig_sums(im_, t_, 0.0, omega);
  const double ys = std::pow(y, spec_.sigma);
  InversionResult r;
  r.value = ys * spec_.step / M_PI * (c.cos_sum - d.sin_sum);
  r.tail_estimate = tail_magnitude_ * ys * spec_.height / (3.0 * M_PI);
  return r;
}

InversionResult mellin_invert(const std::function<cplx(cplx)>& psi_tilde, const ContourSpec& spec, double y,
                              double tail_tolerance) {
  const ContourSamples samples(psi_tilde, spec);
  const InversionResult r = samples.invert(y);
  require(r.tail_estimate <= tail_tolerance, ErrorKind::truncation,
          "contour tail estimate " + std::to_string(r.tail_estimate) + " exceeds tolerance");
  return r;
}

}  // namespace qvar::testfn
