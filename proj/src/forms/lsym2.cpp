#include <cmath>
#include <complex>
#include <string>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"
#include "qvar/forms/eigenform.hpp"
#include "qvar/parallel.hpp"
#include "qvar/simd/kernels.hpp"

namespace qvar::forms {

using analytic::cplx;
using analytic::log_gamma;

namespace {

constexpr double kLine = 2.0;
constexpr double kStep = 0.2;

// Samples of R(c + it) / (c + it) on t = 0, h, 2h, ... until negligible.
struct LineSamples {
  std::vector<double> t;
  std::vector<double> re;
  std::vector<double> im;
};

template <class LogRatio>
LineSamples sample_line(LogRatio&& log_ratio) {
  LineSamples s;
  double peak = 0.0;
  for (int j = 0;; ++j) {
    const double t = j * kStep;
    const cplx w(kLine, t);
    const cplx v = std::exp(log_ratio(w)) / w;
    const double mag = std::abs(v);
    peak = std::max(peak, mag);
    s.t.push_back(t);
    s.re.push_back(j == 0 ? 0.5 * v.real() : v.real());
    s.im.push_back(j == 0 ? 0.5 * v.imag() : v.imag());
    if (t > 10.0 && mag < 1e-24 * peak) break;
    require(t < 5000.0, ErrorKind::convergence, "gamma ratio does not decay on the contour");
  }
  return s;
}

// (1/2 pi i) int_{(c)} R(w) y^{-w} dw / w by the trapezoid rule, using
// conjugate symmetry R(conj w) = conj R(w).
double inverse_mellin(const LineSamples& s, double y) {
  const double omega = -std::log(y);
  const auto c = simd::damped_trig_sums(s.re, s.t, 0.0, omega);
  const auto d = simd::damped_trig_sums(s.im, s.t, 0.0, omega);
  return std::pow(y, -kLine) * kStep / M_PI * (c.cos_sum - d.sin_sum);
}

}  // namespace

std::vector<double> lambda_of_squares(std::span<const double> lambda, int n_max) {
  const int stored = static_cast<int>(lambda.size()) - 1;
  std::vector<int> spf(static_cast<std::size_t>(n_max) + 1, 0);
  for (int i = 2; i <= n_max; ++i)
    if (spf[i] == 0)
      for (int j = i; j <= n_max; j += i)
        if (spf[j] == 0) spf[j] = i;
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (n_max >= 1) out[1] = 1.0;
  for (int l = 2; l <= n_max; ++l) {
    int rest = l;
    double value = 1.0;
    while (rest > 1) {
      const int p = spf[rest];
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      require(p <= stored, ErrorKind::missing_data,
              "lambda(" + std::to_string(p) + ") needed but eigen-data stops at " + std::to_string(stored));
      const double lp = lambda[static_cast<std::size_t>(p)];
      double prev = 1.0, cur = lp;
      for (int j = 1; j < 2 * e; ++j) {
        const double next = lp * cur - prev;
        prev = cur;
        cur = next;
      }
      value *= cur;
    }
    out[l] = value;
  }
  return out;
}

LSym2Detail l_sym2_at_1(std::span<const double> lambda, int k, double split) {
  require(split > 0.0, ErrorKind::domain, "split parameter must be positive");
  const double lg_k = std::lgamma(static_cast<double>(k));
  const double log_pi = std::log(M_PI);
  const double log_2pi = std::log(2.0 * M_PI);
  // Gamma factor of L(s, sym^2 f): Gamma_R(s + 1) Gamma_C(s + k - 1).
  const auto upper = sample_line([&](cplx w) {
    return -0.5 * w * log_pi + log_gamma(0.5 * w + 1.0) - w * log_2pi + log_gamma(w + double(k)) - lg_k;
  });
  const auto lower = sample_line([&](cplx w) {
    return (0.5 - 0.5 * w) * log_pi + log_gamma(0.5 * (w + 1.0)) - (w - 1.0) * log_2pi +
           log_gamma(w + double(k - 1)) - lg_k;
  });

  std::vector<double> terms;
  int quiet = 0;
  for (int n = 1; quiet < 8; ++n) {
    require(n < 1000000, ErrorKind::convergence, "approximate functional equation did not terminate");
    const double t = inverse_mellin(upper, n / split) / n + inverse_mellin(lower, n * split);
    terms.push_back(t);
    // roundoff in the trapezoid sums leaves a floor near 1e-19 n^-2
    quiet = std::abs(t) * std::pow(1.0 + std::log(n), 2) < 1e-16 * std::abs(terms.front()) ? quiet + 1 : 0;
  }
  const int n_max = static_cast<int>(terms.size());
  const auto lsq = lambda_of_squares(lambda, n_max);
  CompensatedSum sum;
  for (int n = 1; n <= n_max; ++n) {
    double a = 0.0;
    for (int m = 1; m * m <= n; ++m)
      if (n % (m * m) == 0) a += lsq[static_cast<std::size_t>(n / (m * m))];
    sum.add(a * terms[static_cast<std::size_t>(n - 1)]);
  }
  return {sum.value(), n_max};
}

double l_sym2_at_1(const Eigenform& f) {
  const double v = l_sym2_at_1(f.lambda, f.weight).value;
  require(v > 0.0, ErrorKind::convergence, "non-positive L(1, sym^2 f)");
  return v;
}

}  // namespace qvar::forms
