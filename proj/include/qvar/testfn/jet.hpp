#pragma once

#include <array>
#include <cmath>

namespace qvar::testfn {

/// Truncated Taylor series c[j] = f^{(j)}(x0) / j!, j <= 8.
struct Jet {
  static constexpr int kOrder = 8;
  std::array<double, kOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double x0) {
    Jet j;
    j.c[0] = x0;
    j.c[1] = 1.0;
    return j;
  }

  double derivative(int order) const {
    double f = 1.0;
    for (int i = 2; i <= order; ++i) f *= i;
    return c[order] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i <= kOrder; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i <= kOrder; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i)
      for (int j = 0; i + j <= kOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

inline Jet recip(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int n = 1; n <= Jet::kOrder; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += a.c[j] * r.c[n - j];
    r.c[n] = -s * r.c[0];
  }
  return r;
}

inline Jet exp(const Jet& a) {
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int n = 1; n <= Jet::kOrder; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += j * a.c[j] * r.c[n - j];
    r.c[n] = s / n;
  }
  return r;
}

inline Jet log(const Jet& a) {
  Jet r;
  r.c[0] = std::log(a.c[0]);
  for (int n = 1; n <= Jet::kOrder; ++n) {
    double s = n * a.c[n];
    for (int j = 1; j < n; ++j) s -= j * r.c[j] * a.c[n - j];
    r.c[n] = s / (n * a.c[0]);
  }
  return r;
}

}  // namespace qvar::testfn
