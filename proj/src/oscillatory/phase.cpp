#include <algorithm>
#include <cmath>

#include "qvar/error.hpp"
#include "qvar/oscillatory/oscillatory.hpp"
#include "qvar/quadrature.hpp"

namespace qvar::oscillatory {

bool amplitude_bounds_hold(const PhaseProblem& p, double scale) {
  for (int i = 0; i < 50; ++i) {
    const double t = p.lo + (p.hi - p.lo) * (i + 0.5) / 50.0;
    for (int j = 0; j <= 4; ++j)
      if (std::abs(p.amplitude(t, j)) > 2.0 * p.x_scale * std::pow(scale, -j)) return false;
  }
  return true;
}

cplx oscillatory_integral(const PhaseProblem& p, double freq) {
  const double span = p.hi - p.lo;
  cplx total = 0.0;
  double a = p.lo;
  while (a < p.hi) {
    const double slope = std::abs(freq * p.phase(a, 1));
    const double curve = std::abs(freq * p.phase(a, 2));
    double width = span / 32.0;
    if (slope > 0.0) width = std::min(width, 0.5 * M_PI / slope);
    if (curve > 0.0) width = std::min(width, std::sqrt(0.5 * M_PI / curve));
    const double b = std::min(p.hi, a + width);
    total += quad::integrate(
        [&](double t) {
          const double ph = freq * p.phase(t, 0);
          return p.amplitude(t, 0) * cplx(std::cos(ph), std::sin(ph));
        },
        a, b, 1, 20);
    a = b;
  }
  return total;
}

NonstationaryCheck nonstationary_bound_check(const PhaseProblem& p, int big_a) {
  for (int i = 0; i <= 200; ++i) {
    const double t = p.lo + (p.hi - p.lo) * i / 200.0;
    require(std::abs(p.phase(t, 1)) >= p.r_scale, ErrorKind::derivative_floor, "|phase'| drops below R");
  }
  NonstationaryCheck r;
  r.integral = oscillatory_integral(p, 1.0);
  r.envelope = (p.hi - p.lo) * p.x_scale *
               (std::pow(p.q_scale * p.r_scale / std::sqrt(p.y_scale), -big_a) + std::pow(p.r_scale * p.u_scale, -big_a));
  return r;
}

double stationary_point(const PhaseProblem& p) {
  constexpr int kGrid = 400;
  std::vector<double> t(kGrid + 1), d(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    t[i] = p.lo + (p.hi - p.lo) * i / kGrid;
    d[i] = p.phase(t[i], 1);
  }
  int found = 0;
  double a = 0.0, b = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    if (d[i] == 0.0 || (d[i] < 0.0) != (d[i + 1] < 0.0)) {
      if (d[i + 1] == 0.0 && i + 1 < kGrid) continue;  // counted at the next cell
      ++found;
      a = t[i];
      b = t[i + 1];
    }
  }
  require(found > 0, ErrorKind::no_stationary_point, "phase' has no zero; use the first-derivative test");
  require(found == 1, ErrorKind::multiple_stationary_points, "phase' has several zeros on the support");
  double fa = p.phase(a, 1);
  while (b - a > 1e-12 * std::max(1.0, std::abs(a))) {
    const double mid = 0.5 * (a + b);
    const double fm = p.phase(mid, 1);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  const double mid = 0.5 * (a + b);
  return mid - p.phase(mid, 1) / p.phase(mid, 2);
}

StationaryPhase stationary_phase_eval(const PhaseProblem& p) {
  StationaryPhase r;
  r.t0 = stationary_point(p);
  const double f2 = p.phase(r.t0, 2);
  const double sgn = f2 > 0.0 ? 1.0 : -1.0;
  r.main = std::polar(1.0, sgn * M_PI / 4.0) * std::polar(1.0, 2.0 * M_PI * p.phase(r.t0, 0)) /
           std::sqrt(std::abs(f2)) * p.amplitude(r.t0, 0);
  r.direct = oscillatory_integral(p, 2.0 * M_PI);
  const double x = p.x_scale, y = p.y_scale, q = p.q_scale, v = p.v_scale;
  r.err_envelope = std::pow(q, 1.5) * x / std::pow(y, 1.5) * (1.0 / (v * v) + std::pow(y, 2.0 / 3.0) / (q * q));
  r.trivial_bound = x * q / std::sqrt(y) + 1.0;
  const double z = q + x + y + p.v1_scale + 1.0;
  r.hypotheses_hold = y >= std::pow(z, 3.0 / 20.0) && p.v1_scale >= v && v >= q * std::pow(z, 1.0 / 40.0) / std::sqrt(y);
  return r;
}

}  // namespace qvar::oscillatory
