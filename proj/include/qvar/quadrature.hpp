#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qvar/parallel.hpp"

namespace qvar::quad {

/// Gauss-Legendre rule on [-1, 1], full node set in ascending order.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Supported orders: 10, 20, 30, 40, 60.
const Rule& gauss_legendre(int order);

/// Nodes and weights of a composite rule with equal panels over [a, b].
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

NodeSet composite(double a, double b, int panels, int order = 20);

/// Composite Gauss-Legendre with equal panels. Works for any value type with
/// + and scalar *; panel sums are accumulated in fixed order.
template <class F>
auto integrate(F&& f, double a, double b, int panels, int order = 20) {
  const Rule& r = gauss_legendre(order);
  const double h = (b - a) / panels;
  using T = decltype(f(a));
  T total{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    T acc{};
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + 0.5 * h * r.x[i]);
    total += (0.5 * h) * acc;
  }
  return total;
}

/// Real-valued variant with compensated accumulation across panels.
template <class F>
double integrate_compensated(F&& f, double a, double b, int panels, int order = 20) {
  const Rule& r = gauss_legendre(order);
  const double h = (b - a) / panels;
  CompensatedSum total;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < r.x.size(); ++i)
      total.add(0.5 * h * r.w[i] * f(mid + 0.5 * h * r.x[i]));
  }
  return total.value();
}

/// Doubles the panel count until two successive results agree to
/// max(abs_tol, rel_tol*|I|); throws convergence after max_panels.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                          int start_panels = 4, int max_panels = 1 << 14, int order = 20);

}  // namespace qvar::quad

#include "qvar/error.hpp"

namespace qvar::quad {

template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                          int start_panels, int max_panels, int order) {
  int panels = start_panels;
  double prev = integrate_compensated(f, a, b, panels, order);
  while (panels < max_panels) {
    panels *= 2;
    const double cur = integrate_compensated(f, a, b, panels, order);
    const double tol = std::max(abs_tol, rel_tol * std::abs(cur));
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  raise(ErrorKind::convergence, "panel refinement did not converge");
}

}  // namespace qvar::quad
