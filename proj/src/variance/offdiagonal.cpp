#include <cmath>
#include <complex>

#include "qvar/error.hpp"
#include "qvar/expsums/kloosterman.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/simd/kernels.hpp"
#include "qvar/variance/variance.hpp"

namespace qvar::variance {

double od_phase(double n1, double n2, double m1, double m2) {
  const double prod = n1 * (n1 + m1) * n2 * (n2 + m2);
  const double lin = 2.0 * n1 * n2 + n1 * m2 + n2 * m1;
  // 2 sqrt(prod) - lin = (4 prod - lin^2) / (2 sqrt(prod) + lin); exact numerator for integers.
  const long double num = 4.0L * prod - static_cast<long double>(lin) * lin;
  return static_cast<double>(num / (2.0L * std::sqrt(static_cast<long double>(prod)) + lin));
}

double od_phase_slope(double x, double n2, double m1, double m2, double v) {
  return std::sqrt(n2 * (n2 + m2)) * (std::sqrt((x + m1) / x) + std::sqrt(x / (x + m1))) - 2.0 * n2 - m2 - v;
}

double od_stationary_point(double v, double n2, double m1, double m2) {
  if (v == 0.0) return m1 * n2 / m2;
  return 0.5 * m1 * (-1.0 + (v + m2 + 2.0 * n2) / std::sqrt((v + m2) * (v + m2) + 4.0 * v * n2));
}

namespace {

struct Side {
  int d, n, m;
  long long big_n;  // n (n + m)
  std::vector<double> profile;
};

std::vector<Side> enumerate_side(const Bump& psi, const std::vector<double>& t, double big_g, double t_lo,
                                 double t_hi, int d_max, int m_min, double m_cap) {
  std::vector<Side> out;
  for (int d = 1; d <= d_max; ++d) {
    const int m_max = static_cast<int>(std::floor(m_cap / d));
    // psi(t G / (2 pi d (2n+m))) != 0 needs d (2n+m) inside this range.
    const double s_lo = t_lo * big_g / (2.0 * M_PI * psi.support_hi()) / d;
    const double s_hi = t_hi * big_g / (2.0 * M_PI * psi.support_lo()) / d;
    for (int m = m_min; m <= m_max; ++m)
      for (int n = std::max(1, static_cast<int>(std::floor((s_lo - m) / 2.0))); 2 * n + m < s_hi; ++n) {
        Side e{d, n, m, static_cast<long long>(n) * (n + m), std::vector<double>(t.size())};
        const double s = 2.0 * n + m;
        bool any = false;
        for (std::size_t j = 0; j < t.size(); ++j) {
          e.profile[j] = psi(t[j] * big_g / (2.0 * M_PI * d * s)) * std::exp(-t[j] * big_g * m * m / (s * s));
          any = any || e.profile[j] != 0.0;
        }
        if (any) out.push_back(std::move(e));
      }
  }
  return out;
}

}  // namespace

OdProbe od_probe(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const ExponentConfig& cfg) {
  cfg.validate();
  require_shifted(w);
  const double big_k = w.big_k, big_g = w.big_g;
  require(big_k <= kOdMaxK, ErrorKind::cost_guard, "off-diagonal probe is limited to K <= 500");
  OdProbe r;
  r.d_max = static_cast<int>(std::floor(std::pow(big_k, cfg.delta)));
  r.c_max = static_cast<int>(std::floor(std::pow(big_k, 1.0 - cfg.theta + cfg.eps)));
  r.m_min = static_cast<int>(std::ceil(std::pow(big_k, cfg.eta)));
  const double m_cap = std::pow(big_k, 0.5 + cfg.eps);
  r.m_max = static_cast<int>(std::floor(m_cap));

  // sqrt(u) = t over supp g, g(t) = h(t - K/G).
  const Bump& h = w.window;
  const double shift = big_k / big_g;
  const double t_lo = h.support_lo() + shift, t_hi = h.support_hi() + shift;
  const auto nodes = quad::composite(t_lo, t_hi, 4);
  std::vector<double> t(nodes.size()), t_sq(nodes.size()), base(nodes.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = nodes.x[j];
    t_sq[j] = t[j] * t[j];
    base[j] = nodes.w[j] * h(t[j] - shift) * t[j];
  }
  // varpi = (G/16) sqrt(2/pi) int g(t) t psi1 psi2 exp(...) e^{i t^2 beta} dt.
  const double varpi_front = big_g / 16.0 * std::sqrt(2.0 / M_PI);

  const auto side1 = enumerate_side(psi1, t, big_g, t_lo, t_hi, r.d_max, r.m_min, m_cap);
  const auto side2 = enumerate_side(psi2, t, big_g, t_lo, t_hi, r.d_max, r.m_min, m_cap);

  std::complex<double> total = 0.0;
  std::vector<double> amp(t.size());
  for (int c = 1; c <= r.c_max; ++c) {
    const expsums::InverseTable table(c);
    for (const auto& e1 : side1) {
      if (c * e1.d > r.c_max) continue;
      std::vector<double> b1(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) b1[j] = base[j] * e1.profile[j];
      for (const auto& e2 : side2) {
        if (c * e1.d * e2.d > r.c_max) continue;
        const double root = std::sqrt(static_cast<double>(e1.big_n) * static_cast<double>(e2.big_n));
        for (std::size_t j = 0; j < t.size(); ++j) amp[j] = b1[j] * e2.profile[j];
        const auto ts = simd::damped_trig_sums(amp, t_sq, 0.0, c * big_g * big_g / (8.0 * M_PI * root));
        const std::complex<double> varpi = varpi_front * std::complex<double>(ts.cos_sum, ts.sin_sum);
        const long long lin = 2LL * e1.n * e2.n + static_cast<long long>(e1.n) * e2.m +
                              static_cast<long long>(e2.n) * e1.m;
        const double phase = static_cast<double>(lin % c) / c + od_phase(e1.n, e2.n, e1.m, e2.m) / c;
        const double kl = expsums::kloosterman_direct(e1.big_n, e2.big_n, table);
        total += kl / std::sqrt(static_cast<double>(c)) * expsums::e(phase) /
                 (e1.d * e2.d * std::pow(root, 1.5)) * varpi;
        ++r.terms;
      }
    }
  }
  r.od = -std::sqrt(M_PI) * big_g * (std::polar(1.0, -M_PI / 4.0) * total).imag();
  r.normalized = std::abs(r.od) * std::pow(big_k, -11.0 / 8.0);

  // Stationary point of x -> f(x, n2, m1, m2) at v = 0 on sampled parameters.
  for (std::size_t i = 0; i < side1.size(); i += std::max<std::size_t>(1, side1.size() / 16))
    for (std::size_t j = 0; j < side2.size(); j += std::max<std::size_t>(1, side2.size() / 16)) {
      const double n2 = side2[j].n, m1 = side1[i].m, m2 = side2[j].m;
      const double x0 = od_stationary_point(0.0, n2, m1, m2);
      r.max_stationary_residual = std::max(r.max_stationary_residual, std::abs(od_phase_slope(x0, n2, m1, m2)));
    }
  return r;
}

}  // namespace qvar::variance
