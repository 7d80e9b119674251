#include <algorithm>
#include <cmath>
#include <limits>

#include "qvar/error.hpp"
#include "qvar/forms/eigenform.hpp"
#include "qvar/parallel.hpp"
#include "qvar/quadrature.hpp"

namespace qvar::forms {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Series {
  std::span<const double> log_abs;
  std::span<const int> sign;
  int k;
  int used = 0;  // terms beyond this index are negligible on the domain

  int size() const { return used; }

  // log of the largest |c_n| e^{-2 pi n y}.
  double peak_exponent(double y) const {
    double m = kNegInf;
    for (int n = 1; n <= size(); ++n) m = std::max(m, log_abs[n] - 2.0 * M_PI * n * y);
    return m;
  }

  // Parseval in x: int_{-1/2}^{1/2} |F|^2 dx y^{k-2} = sum c_n^2 e^{-4 pi n y} y^{k-2}
  // returned as (mantissa, log scale).
  std::pair<double, double> strip_integrand(double y) const {
    const double scale = 2.0 * peak_exponent(y);
    double s = 0.0;
    for (int n = 1; n <= size(); ++n) {
      const double e = 2.0 * (log_abs[n] - 2.0 * M_PI * n * y) - scale;
      if (e > -80.0) s += std::exp(e);
    }
    return {s, scale + (k - 2) * std::log(y)};
  }

  std::pair<double, double> cap_integrand(double x, double y) const {
    const double scale = peak_exponent(y);
    double re = 0.0, im = 0.0;
    for (int n = 1; n <= size(); ++n) {
      const double e = log_abs[n] - 2.0 * M_PI * n * y - scale;
      if (e < -80.0 || sign[n] == 0) continue;
      const double a = sign[n] * std::exp(e);
      re += a * std::cos(2.0 * M_PI * n * x);
      im += a * std::sin(2.0 * M_PI * n * x);
    }
    return {re * re + im * im, 2.0 * scale + (k - 2) * std::log(y)};
  }
};

}  // namespace

double petersson_norm_log_coeffs(std::span<const double> log_abs, std::span<const int> sign, int k,
                                 const PeterssonOptions& opt) {
  const int stored = static_cast<int>(log_abs.size()) - 1;
  require(stored >= 1, ErrorKind::domain, "empty expansion");
  Series f{log_abs, sign, k, stored};
  const double y_low = std::sqrt(3.0) / 2.0;
  const double top = f.peak_exponent(y_low);
  const double last = log_abs[stored] - 2.0 * M_PI * stored * y_low;
  require(last - top < std::log(1e-12), ErrorKind::truncation,
          "expansion too short: tail term at y = sqrt(3)/2 exceeds 1e-12 of the peak");

  while (f.used > 1 && log_abs[f.used] - 2.0 * M_PI * f.used * y_low < top - 90.0) --f.used;

  // Common reference scale so that every panel value stays representable.
  const double ref = 2.0 * top + (k - 2) * std::log(y_low);
  auto strip_value = [&](double y) {
    auto [m, s] = f.strip_integrand(y);
    return m * std::exp(s - ref);
  };

  double y_max = opt.y_cutoff;
  if (y_max <= 0.0) {
    // Extend until the strip integrand has fallen below e^{-45} of its value at y = 1.
    const double at_one = std::log(strip_value(1.0));
    y_max = 1.0;
    while (std::log(strip_value(y_max)) > at_one - 45.0) y_max += 0.25;
  }
  const int y_panels = std::max(8, static_cast<int>(std::ceil(8.0 * (y_max - 1.0))));
  const double strip = quad::integrate_compensated(strip_value, 1.0, y_max, y_panels, 30);

  // Region below y = 1 bounded by the unit circle.
  const auto xs = quad::composite(-0.5, 0.5, opt.x_panels, 30);
  CompensatedSum cap;
  for (std::size_t ix = 0; ix < xs.size(); ++ix) {
    const double x = opt.reflect_x ? -xs.x[xs.size() - 1 - ix] : xs.x[ix];
    const double wx = opt.reflect_x ? xs.w[xs.size() - 1 - ix] : xs.w[ix];
    const double y0 = std::sqrt(1.0 - x * x);
    const double inner = quad::integrate_compensated(
        [&](double y) {
          auto [m, s] = f.cap_integrand(x, y);
          return m * std::exp(s - ref);
        },
        y0, 1.0, opt.y_panels_cap, 30);
    cap.add(wx * inner);
  }
  return (strip + cap.value()) * std::exp(ref);
}

double petersson_norm(const QExpansion& f, const PeterssonOptions& opt) {
  std::vector<double> log_abs(static_cast<std::size_t>(f.truncation) + 1, kNegInf);
  std::vector<int> sign(log_abs.size(), 0);
  for (int n = 1; n <= f.truncation; ++n) {
    const int s = sgn(f[n]);
    if (s == 0) continue;
    long e = 0;
    const double m = mpz_get_d_2exp(&e, f[n].get_mpz_t());
    log_abs[n] = std::log(std::abs(m)) + e * std::log(2.0);
    sign[n] = s;
  }
  return petersson_norm_log_coeffs(log_abs, sign, f.weight, opt);
}

double petersson_norm(const Eigenform& f, const PeterssonOptions& opt) {
  std::vector<double> log_abs(f.lambda.size(), kNegInf);
  std::vector<int> sign(f.lambda.size(), 0);
  const int k = f.weight;
  for (int n = 1; n < static_cast<int>(f.lambda.size()); ++n) {
    const double l = f.lambda[n];
    if (l == 0.0) continue;
    log_abs[n] = std::log(std::abs(l)) + 0.5 * (k - 1) * std::log(4.0 * M_PI * n);
    sign[n] = l > 0 ? 1 : -1;
  }
  return petersson_norm_log_coeffs(log_abs, sign, k, opt);
}

}  // namespace qvar::forms
