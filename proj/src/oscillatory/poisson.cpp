#include <cmath>

#include "qvar/error.hpp"
#include "qvar/expsums/arithmetic.hpp"
#include "qvar/oscillatory/oscillatory.hpp"
#include "qvar/quadrature.hpp"

namespace qvar::oscillatory {

namespace {

// Radius beyond which |f| stays below rel * peak.
double decay_radius(const std::function<double(double)>& f, double rel) {
  double peak = 0.0;
  for (int i = -200; i <= 200; ++i) peak = std::max(peak, std::abs(f(0.05 * i)));
  require(peak > 0.0, ErrorKind::domain, "f vanishes near the origin; cannot estimate its range");
  for (double r = 1.0; r <= 1e6; r *= 2.0) {
    double worst = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double x = r * (1.0 + i / 64.0);
      worst = std::max({worst, std::abs(f(x)), std::abs(f(-x))});
    }
    if (worst < rel * peak) return r;
  }
  raise(ErrorKind::truncation, "f does not decay within |x| <= 1e6");
}

}  // namespace

PoissonSides poisson_on_class(const std::function<double(double)>& f, int c, int a) {
  require(c >= 1, ErrorKind::domain, "modulus must be positive");
  const double radius = decay_radius(f, 1e-18);
  PoissonSides r;
  const long first = static_cast<long>(std::floor(-2.0 * radius));
  const long start = first + expsums::mod(a - first, c);
  double direct = 0.0;
  for (long n = start; n <= 2.0 * radius; n += c) {
    direct += f(static_cast<double>(n));
    ++r.direct_terms;
  }
  r.direct = direct;

  auto fourier = [&](double xi) {
    const int panels = 32 + static_cast<int>(std::ceil(8.0 * radius * std::abs(xi)));
    return quad::integrate(
        [&](double x) {
          const double ph = -2.0 * M_PI * x * xi;
          return f(x) * cplx(std::cos(ph), std::sin(ph));
        },
        -2.0 * radius, 2.0 * radius, panels);
  };
  const double scale = std::abs(fourier(0.0));
  cplx dual = fourier(0.0);
  r.dual_terms = 1;
  int quiet = 0;
  for (int n = 1; quiet < 3; ++n) {
    require(n < 100000, ErrorKind::truncation, "dual side does not decay");
    cplx pair = 0.0;
    for (int sgn : {1, -1}) {
      const double ph = 2.0 * M_PI * a * sgn * n / static_cast<double>(c);
      pair += fourier(sgn * n / static_cast<double>(c)) * cplx(std::cos(ph), std::sin(ph));
    }
    dual += pair;
    r.dual_terms += 2;
    // the quadrature for f^ bottoms out near 1e-15 of its scale
    quiet = std::abs(pair) < 1e-13 * std::max(scale, 1e-300) ? quiet + 1 : 0;
  }
  r.dual = dual.real() / c;
  return r;
}

}  // namespace qvar::oscillatory
