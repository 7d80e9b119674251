#include <algorithm>
#include <cmath>
#include <tuple>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"
#include "qvar/parallel.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/testfn/transforms.hpp"
#include "qvar/variance/variance.hpp"

namespace qvar::variance {

using analytic::cplx;

namespace {

const double kRoot2Pi = std::sqrt(2.0) * M_PI;  // sqrt(2) * pi

struct PairKey {
  long long n;  // a * b
  int s;        // a + b
  int gap;      // b - a > 0
};

// sqrt(2/pi) int h(t) factor(t) dt.
template <class F>
double h_moment(const Bump& h, F&& factor) {
  return std::sqrt(2.0 / M_PI) *
         quad::integrate_compensated([&](double t) { return h(t) * factor(t); }, h.support_lo(), h.support_hi(), 32);
}

}  // namespace

DiagonalNumeric diagonal_numeric(const WindowWeights& w, const Bump& psi1, const Bump& psi2,
                                 const DiagonalOptions& opt) {
  require_shifted(w);
  const double big_k = w.big_k, big_g = w.big_g;
  // g(t) = h(t - K/G) with t = (k-1)/G.
  const Bump& h = w.window;
  const double t_lo = h.support_lo() + big_k / big_g, t_hi = h.support_hi() + big_k / big_g;
  const auto nodes = quad::composite(t_lo, t_hi, opt.t_panels);
  const std::size_t nt = nodes.size();
  std::vector<double> x(nt), weight(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = nodes.x[j];
    x[j] = t * big_g + 1.0;
    weight[j] = nodes.w[j] * h(t - big_k / big_g) * t * big_g / 16.0;
  }
  const double x_min = t_lo * big_g + 1.0, x_max = t_hi * big_g + 1.0;

  // psi_i(X / (2 pi d s)) != 0 needs d s < X / (2 pi lo_i).
  const double lo1 = psi1.support_lo(), lo2 = psi2.support_lo();
  const int s_max = static_cast<int>(std::floor(x_max / (2.0 * M_PI * std::max(lo1, lo2))));
  const double gap_ratio = std::sqrt(2.0 * opt.gauss_cut / x_min);
  std::vector<PairKey> keys;
  for (int s = 3; s <= s_max; ++s)
    for (int gap = (s % 2 == 0 ? 2 : 1); gap < s && gap <= gap_ratio * s; gap += 2) {
      const long long a = (s - gap) / 2, b = (s + gap) / 2;
      keys.push_back({a * b, s, gap});
    }
  std::sort(keys.begin(), keys.end(),
            [](const PairKey& p, const PairKey& q) { return std::tie(p.n, p.s) < std::tie(q.n, q.s); });
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (i == 0 || keys[i].n != keys[i - 1].n) group_start.push_back(i);
  group_start.push_back(keys.size());

  auto profile = [&](const Bump& psi, const PairKey& p, std::vector<double>& out) {
    const int d_max = static_cast<int>(std::floor(x_max / (2.0 * M_PI * psi.support_lo() * p.s)));
    const double g2 = static_cast<double>(p.gap) * p.gap / (2.0 * p.s * static_cast<double>(p.s));
    for (std::size_t j = 0; j < nt; ++j) {
      double acc = 0.0;
      for (int d = 1; d <= d_max; ++d) acc += psi(x[j] / (2.0 * M_PI * d * p.s)) / d;
      out[j] = acc * std::exp(-x[j] * g2);
    }
  };

  constexpr std::size_t kChunks = 64;
  const std::size_t groups = group_start.size() - 1;
  struct Partial {
    double total = 0.0, diag = 0.0;
  };
  const auto partial = parallel_map<Partial>(kChunks, [&](std::size_t chunk) {
    Partial out;
    CompensatedSum total, diag;
    std::vector<double> v1(nt), v2(nt), sum1(nt), sum2(nt), prod(nt);
    for (std::size_t gi = chunk * groups / kChunks; gi < (chunk + 1) * groups / kChunks; ++gi) {
      std::fill(sum1.begin(), sum1.end(), 0.0);
      std::fill(sum2.begin(), sum2.end(), 0.0);
      std::fill(prod.begin(), prod.end(), 0.0);
      for (std::size_t i = group_start[gi]; i < group_start[gi + 1]; ++i) {
        profile(psi1, keys[i], v1);
        profile(psi2, keys[i], v2);
        for (std::size_t j = 0; j < nt; ++j) {
          sum1[j] += v1[j];
          sum2[j] += v2[j];
          prod[j] += v1[j] * v2[j];
        }
      }
      const double inv_n = 1.0 / static_cast<double>(keys[group_start[gi]].n);
      double t_all = 0.0, t_diag = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        // Each unordered pair stands for (a, b) and (b, a).
        t_all += weight[j] * 4.0 * sum1[j] * sum2[j];
        t_diag += weight[j] * 2.0 * prod[j];
      }
      total.add(t_all * inv_n);
      diag.add(t_diag * inv_n);
    }
    out.total = total.value();
    out.diag = diag.value();
    return out;
  });
  CompensatedSum total, diag;
  for (const auto& p : partial) {
    total.add(p.total);
    diag.add(p.diag);
  }
  DiagonalNumeric r;
  r.value = big_g * total.value();
  r.diagonal_only = big_g * diag.value();
  r.mirror = r.diagonal_only;
  r.sporadic = r.value - r.diagonal_only - r.mirror;
  r.pairs = static_cast<long>(keys.size());
  return r;
}

double zeta_line_integral(const Bump& psi1, const Bump& psi2, double height) {
  const testfn::MellinSampler m1(psi1, height + 1.0), m2(psi2, height + 1.0);
  auto f = [&](double t) {
    const cplx s(1.0, t);
    return (m1(-s) * m2(s) * analytic::zeta(1.0 - s) * analytic::zeta(1.0 + s)).real();
  };
  // (1/2 pi i) int F ds over Re s = 1 with F(conj s) = conj F(s).
  const int panels = std::max(10, static_cast<int>(std::ceil(height)));
  return quad::integrate_compensated(f, 0.0, height, panels) / M_PI;
}

MellinData mellin_data(const Bump& psi1, const Bump& psi2, double height) {
  MellinData md;
  md.psi1_at_0 = testfn::mellin(psi1, 0.0).real();
  md.psi2_at_0 = testfn::mellin(psi2, 0.0).real();
  md.psi2_slope_at_0 = testfn::mellin_derivative(psi2, 0.0).real();
  if (height <= 0.0) {
    constexpr double kCap = 3000.0;
    const testfn::MellinSampler m1(psi1, kCap + 30.0), m2(psi2, kCap + 30.0);
    auto mag = [&](double t) { return std::abs(m1(cplx(-1.0, -t)) * m2(cplx(1.0, t))) * (1.0 + t); };
    double peak = 0.0;
    for (double t = 0.0; t <= 10.0; t += 0.25) peak = std::max(peak, mag(t));
    for (height = 10.0;; height += 10.0) {
      require(height < kCap, ErrorKind::truncation, "zeta line integral does not decay");
      double worst = 0.0;
      for (double t = height; t <= height + 20.0; t += 0.25) worst = std::max(worst, mag(t));
      if (worst < 1e-15 * peak) break;
    }
  }
  md.line_height = height;
  md.line_integral = zeta_line_integral(psi1, psi2, height);
  return md;
}

DiagonalAsymptotic diagonal_asymptotic(const WindowWeights& w, const MellinData& md, bool corrections, double eps) {
  require_shifted(w);
  const double big_k = w.big_k, big_g = w.big_g, ratio = big_g / big_k;
  const Bump& h = w.window;
  auto one = [&](double t) { return corrections ? 1.0 + t * ratio : 1.0; };
  const double h_half = h_moment(h, [&](double t) { return std::sqrt(one(t)); });
  const double h_log = h_moment(h, [&](double t) { return std::sqrt(one(t)) * std::log(one(t)); });
  const double h_lin = h_moment(h, [&](double t) { return one(t); });
  const double front = std::sqrt(big_k) * big_g;
  const double p00 = md.psi1_at_0 * md.psi2_at_0;
  DiagonalAsymptotic r;
  r.terms[0] = front * std::log(big_k) * kRoot2Pi / 32.0 * p00 * h_half;
  r.terms[1] = front * kRoot2Pi / 32.0 * p00 * h_log;
  r.terms[2] = front * h_lin *
               (kRoot2Pi / 16.0 * (1.5 * analytic::euler_gamma - std::log(4.0 * M_PI)) * p00 +
                kRoot2Pi / 16.0 * md.psi1_at_0 * md.psi2_slope_at_0);
  r.terms[3] = front * kRoot2Pi / 16.0 * h_half * md.line_integral;
  r.value = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
  r.error_k2_over_g = std::pow(big_k, 2.0 + eps) / big_g;
  r.error_g2_over_rk = std::pow(big_k, -0.5 + eps) * big_g * big_g;
  return r;
}

DiagonalAsymptotic diagonal_asymptotic(const WindowWeights& w, const Bump& psi1, const Bump& psi2,
                                       bool corrections) {
  return diagonal_asymptotic(w, mellin_data(psi1, psi2), corrections);
}

MainTerm variance_main_term(const WindowWeights& w, const MellinData& md) {
  require_shifted(w);
  const double big_k = w.big_k, big_g = w.big_g;
  const double h0 = testfn::hbar_zero(w.window);
  const double front = std::sqrt(big_k) * big_g;
  const double p00 = md.psi1_at_0 * md.psi2_at_0;
  MainTerm r;
  r.terms[0] = front * std::log(big_k) * kRoot2Pi / 32.0 * p00 * h0;
  r.terms[1] = front * h0 *
               (kRoot2Pi / 16.0 * (1.5 * analytic::euler_gamma - std::log(4.0 * M_PI)) * p00 +
                kRoot2Pi / 16.0 * md.psi1_at_0 * md.psi2_slope_at_0);
  r.terms[2] = front * kRoot2Pi / 16.0 * h0 * md.line_integral;
  r.value = r.terms[0] + r.terms[1] + r.terms[2];
  return r;
}

MainTerm variance_main_term(const WindowWeights& w, const Bump& psi1, const Bump& psi2) {
  return variance_main_term(w, mellin_data(psi1, psi2));
}

}  // namespace qvar::variance
