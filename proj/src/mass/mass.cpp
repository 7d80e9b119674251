#include "qvar/mass/mass.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "qvar/error.hpp"
#include "qvar/parallel.hpp"
#include "qvar/simd/kernels.hpp"

namespace qvar::mass {

using forms::Eigenform;
using testfn::Bump;

namespace {

// log of (4 pi n y)^{(k-1)/2} e^{-2 pi n y} at its maximum over n y.
double peak_log(int k) { return 0.5 * (k - 1) * (std::log(k - 1.0) - 1.0); }

struct Series {
  std::vector<double> lambda;   // lambda(n), n = 1..N
  std::vector<double> log_n;    // log n
  std::vector<double> n;
  double half = 0.0;            // (k-1)/2
  double shift = 0.0;           // peak_log
  mutable std::vector<double> expo;

  Series(const Eigenform& f, int cut) : half(0.5 * (f.weight - 1)), shift(peak_log(f.weight)) {
    for (int i = 1; i <= cut; ++i) {
      lambda.push_back(f.lambda_at(i));
      log_n.push_back(std::log(static_cast<double>(i)));
      n.push_back(i);
    }
    expo.resize(lambda.size());
  }

  // sum_n lambda(n) (4 pi n y)^{(k-1)/2} e^{-2 pi n y} / e^{shift}.
  double operator()(double y) const {
    const double base = half * std::log(4.0 * M_PI * y) - shift;
    for (std::size_t i = 0; i < n.size(); ++i) expo[i] = base + half * log_n[i] - 2.0 * M_PI * n[i] * y;
    return simd::exp_dot(lambda, expo);
  }
};

double log_scale(const Eigenform& f) {
  require(f.a1_sq > 0.0, ErrorKind::missing_data, "|a_f(1)|^2 not available");
  return f.log_a1_sq + 2.0 * peak_log(f.weight);
}

}  // namespace

FourierCut fourier_truncation(int k, const Bump& psi, double rel_tol) {
  const double y0 = psi.support_lo();
  require(y0 > 0.0, ErrorKind::domain, "psi must be supported away from 0");
  const double half = 0.5 * (k - 1);
  auto log_term = [&](double n) { return half * std::log(4.0 * M_PI * n * y0) - 2.0 * M_PI * n * y0; };
  const double ref = log_term(std::max(1.0, (k - 1) / (4.0 * M_PI * y0)));
  double partial = 0.0;
  for (int n = 1; n < 10000000; ++n) {
    partial += std::exp(log_term(n) - ref);
    const double ratio = std::exp(log_term(n + 2.0) - log_term(n + 1.0));
    if (ratio >= 1.0) continue;
    const double tail = std::exp(log_term(n + 1.0) - ref) / (1.0 - ratio);
    if (tail < rel_tol * partial) return {n, tail / partial};
  }
  raise(ErrorKind::truncation, "Fourier tail bound not achievable");
}

MuResult mu_detail(const Eigenform& f, const Bump& psi) {
  const FourierCut cut = fourier_truncation(f.weight, psi);
  require(cut.n <= f.truncation(), ErrorKind::truncation,
          "eigen-data too short for the Fourier tail rule: need N >= " + std::to_string(cut.n));
  const Series series(f, cut.n);
  const double scale = std::exp(log_scale(f));
  const double a = psi.support_lo(), b = psi.support_hi();
  auto integrand = [&](double y) {
    const double s = series(y);
    return s * s * psi(y);
  };
  MuResult r;
  r.truncation = cut.n;
  r.relative_tail = cut.relative_tail;
  int panels = 8;
  double prev = quad::integrate_compensated(integrand, a, b, panels);
  for (;;) {
    panels *= 2;
    require(panels <= 8192, ErrorKind::convergence, "mu quadrature did not converge");
    const double cur = quad::integrate_compensated(integrand, a, b, panels);
    r.quadrature_delta = std::abs(cur - prev) * scale;
    if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) {
      r.value = cur * scale;
      r.nodes = quad::composite(a, b, panels);
      return r;
    }
    prev = cur;
  }
}

double mu(const Eigenform& f, const Bump& psi) { return mu_detail(f, psi).value; }

double mu_tanh_sinh(const Eigenform& f, const Bump& psi) {
  const FourierCut cut = fourier_truncation(f.weight, psi);
  require(cut.n <= f.truncation(), ErrorKind::truncation, "eigen-data too short");
  const Series series(f, cut.n);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double v = ts.integrate(
      [&](double y) {
        const double s = series(y);
        return s * s * psi(y);
      },
      psi.support_lo(), psi.support_hi(), 1e-14);
  return v * std::exp(log_scale(f));
}

double expected(const Bump& psi) {
  const double v = quad::integrate_adaptive([&](double y) { return psi(y) / y; }, psi.support_lo(),
                                            psi.support_hi(), 1e-15, 1e-14, 8);
  return 3.0 / M_PI * v;
}

PairSplit pair_split(const Eigenform& f, const Bump& psi, const MuResult& mu) {
  const int k = f.weight, n_max = mu.truncation;
  const double half = 0.5 * (k - 1), shift2 = 2.0 * peak_log(k);
  const auto& nodes = mu.nodes;
  std::vector<double> psi_w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) psi_w[i] = nodes.w[i] * psi(nodes.x[i]);

  // J(s) = int (2 pi s y)^{k-1} e^{-2 pi s y} psi(y) dy / e^{2 shift}, s = n + m.
  std::vector<double> expo(nodes.size());
  auto moment = [&](int s) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      expo[i] = (k - 1) * std::log(2.0 * M_PI * s * nodes.x[i]) - 2.0 * M_PI * s * nodes.x[i] - shift2;
    return simd::exp_dot(psi_w, expo);
  };

  PairSplit r;
  CompensatedSum off, diag, abs_off;
  for (int s = 2; s <= 2 * n_max; ++s) {
    CompensatedSum coef, abs_coef;
    const int lo = std::max(1, s - n_max), hi = std::min(n_max, s - 1);
    for (int n = lo; n <= hi; ++n) {
      const int m = s - n;
      if (m == n) continue;
      const double w = std::exp(half * std::log(4.0 * n * static_cast<double>(m) / (static_cast<double>(s) * s)));
      const double t = f.lambda_at(n) * f.lambda_at(m) * w;
      coef.add(t);
      abs_coef.add(std::abs(t));
    }
    const double js = moment(s);
    off.add(coef.value() * js);
    abs_off.add(abs_coef.value() * js);
    if (s % 2 == 0 && s / 2 <= n_max) {
      const double l = f.lambda_at(s / 2);
      diag.add(l * l * js);
    }
  }
  const double scale = std::exp(log_scale(f));
  r.off_diagonal = off.value() * scale;
  r.diagonal = diag.value() * scale;
  r.abs_off_diagonal = abs_off.value() * scale;
  return r;
}

double s_psi_direct(const Eigenform& f, const Bump& psi) { return pair_split(f, psi, mu_detail(f, psi)).off_diagonal; }

ShiftedApprox s_psi_approx_detail(const Eigenform& f, const Bump& psi) {
  const int k = f.weight;
  require(f.l_sym2 > 0.0, ErrorKind::missing_data, "L(1, sym^2 f) not available");
  ShiftedApprox r;
  r.l_max = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k)) * std::log(static_cast<double>(k))));
  // psi(k / (2 pi s)) vanishes unless s = 2n + l lies strictly inside this range.
  const double s_lo = k / (2.0 * M_PI * psi.support_hi()), s_hi = k / (2.0 * M_PI * psi.support_lo());
  const int s_max = static_cast<int>(std::floor(s_hi));
  require(s_max <= f.truncation(), ErrorKind::missing_data,
          "eigen-data must cover n up to " + std::to_string(s_max));
  CompensatedSum plus, minus, tail;
  for (int s = std::max(1, static_cast<int>(std::ceil(s_lo))); s <= s_max; ++s) {
    const double p = psi(k / (2.0 * M_PI * s));
    if (p == 0.0) continue;
    // n >= 1 and n + l >= 1 with 2n + l = s.
    for (int l = -(s - 2); l <= s - 2; ++l) {
      if (l == 0 || (s - l) % 2 != 0) continue;
      const int n = (s - l) / 2, m = n + l;
      const double t = f.lambda_at(n) * f.lambda_at(m) / std::sqrt(static_cast<double>(n) * m) *
                       std::exp(-k * static_cast<double>(l) * l / (2.0 * s * s)) * p;
      if (std::abs(l) > r.l_max)
        tail.add(std::abs(t));
      else if (l > 0)
        plus.add(t);
      else
        minus.add(t);
    }
  }
  const double front = M_PI / (2.0 * f.l_sym2);
  r.positive_shifts = front * plus.value();
  r.negative_shifts = front * minus.value();
  r.value = r.positive_shifts + r.negative_shifts;
  r.tail_bound = front * tail.value();
  return r;
}

double s_psi_approx(const Eigenform& f, const Bump& psi) { return s_psi_approx_detail(f, psi).value; }

MassReport mass_report(const Eigenform& f, const Bump& psi) {
  const MuResult m = mu_detail(f, psi);
  const PairSplit split = pair_split(f, psi, m);
  MassReport r;
  r.k = f.weight;
  r.form_index = f.conjugacy_id;
  r.mu = m.value;
  r.expected = expected(psi);
  r.s_direct = split.off_diagonal;
  r.diagonal = split.diagonal;
  r.e_residual = r.mu - r.s_direct - r.expected;
  r.l_sym2 = f.l_sym2;
  r.fourier_tail = m.relative_tail * std::abs(m.value);
  r.quadrature_delta = m.quadrature_delta;
  r.psi_id = psi.descriptor();
  return r;
}

}  // namespace qvar::mass
