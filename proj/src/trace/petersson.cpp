#include "qvar/trace/petersson.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"
#include "qvar/expsums/kloosterman.hpp"
#include "qvar/format.hpp"
#include "qvar/parallel.hpp"
#include "qvar/testfn/transforms.hpp"

namespace qvar::trace {

using testfn::Bump;
using testfn::BumpComponent;

void WindowWeights::validate() const {
  require(big_k > 0.0 && big_g > 0.0, ErrorKind::domain, "K and G must be positive");
  require(big_g <= big_k, ErrorKind::domain, "window needs G <= K");
  require(window.support_lo() >= 0.0 && window.support_hi() > window.support_lo(), ErrorKind::domain,
          "window must be supported in the positive reals");
}

Bump WindowWeights::effective_window() const {
  if (!shifted) return window;
  std::vector<BumpComponent> parts = window.components();
  for (auto& p : parts) {
    require(!p.log_scale, ErrorKind::domain, "shifted windows need linear-scale components");
    p.lo += big_k / big_g;
    p.hi += big_k / big_g;
  }
  return Bump(parts, false, window.family() + "-shifted", window.alpha());
}

double WindowWeights::weight(int k) const {
  const double x = (k - 1) / big_g;
  if (shifted) return window(x - big_k / big_g);
  return window((k - 1) / big_k);
}

std::vector<int> WindowWeights::weights_in_window() const {
  const double lo = shifted ? big_k + big_g * window.support_lo() + 1.0 : big_k * window.support_lo() + 1.0;
  const double hi = shifted ? big_k + big_g * window.support_hi() + 1.0 : big_k * window.support_hi() + 1.0;
  std::vector<int> out;
  for (int k = 2 * static_cast<int>(std::floor(lo / 2.0)); k <= hi; k += 2)
    if (k >= 12 && weight(k) != 0.0) out.push_back(k);
  return out;
}

WindowWeights make_window(double big_k, double theta, const Bump& h, bool shifted) {
  WindowWeights w{big_k, std::pow(big_k, theta), h, shifted};
  w.validate();
  return w;
}

void require_weights(const WeightTable& table, const std::vector<int>& weights) {
  std::ostringstream missing;
  bool any = false;
  for (int k : weights)
    if (!table.count(k)) {
      missing << (any ? " " : "") << k;
      any = true;
    }
  if (any) raise(ErrorKind::missing_data, "eigen-data missing for weights: " + missing.str());
}

double harmonic_weight(const forms::Eigenform& f) {
  require(f.l_sym2 > 0.0, ErrorKind::missing_data, "L(1, sym^2 f) not available");
  return 2.0 * M_PI * M_PI / ((f.weight - 1) * f.l_sym2);
}

ExactPetersson exact_petersson_check(const forms::WeightData& data, int m, int n, double tail_tol) {
  const int k = data.weight;
  require(m >= 1 && n >= 1 && m <= data.truncation && n <= data.truncation, ErrorKind::domain,
          "m, n must lie in [1, N]");
  ExactPetersson r;
  CompensatedSum lhs;
  for (const auto& f : data.forms) lhs.add(harmonic_weight(f) * f.lambda_at(m) * f.lambda_at(n));
  r.lhs = lhs.value();

  // |S| <= c and J_nu(x) <= (x/2)^nu / Gamma(nu+1); the c-tail is at most
  // 2 pi (2 pi sqrt(mn))^{k-1} / Gamma(k) * C^{2-k} / (k-2).
  const double root = std::sqrt(static_cast<double>(m) * n);
  const double log_front = std::log(2.0 * M_PI) + (k - 1) * std::log(2.0 * M_PI * root) - std::lgamma(k) -
                           std::log(k - 2.0);
  int c_max = 1;
  while (log_front + (2.0 - k) * std::log(static_cast<double>(c_max)) > std::log(tail_tol)) {
    require(c_max < 2000000, ErrorKind::truncation, "Petersson c-sum tail bound not achievable");
    c_max = std::max(c_max + 1, static_cast<int>(c_max * 1.05));
  }
  r.c_max = c_max;
  r.tail_bound = std::exp(log_front + (2.0 - k) * std::log(static_cast<double>(c_max)));

  const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;  // i^{-k}
  CompensatedSum sum;
  for (int c = 1; c <= c_max; ++c) {
    const auto j = analytic::bessel_j_scaled(k - 1, 4.0 * M_PI * root / c);
    const double jv = j.value();
    if (jv == 0.0) continue;
    sum.add(expsums::kloosterman(m, n, c) / c * jv);
  }
  r.rhs = (m == n ? 1.0 : 0.0) + 2.0 * M_PI * sign * sum.value();
  return r;
}

double averaged_petersson_lhs(int m, int n, const WindowWeights& w, const WeightTable& table) {
  const auto ks = w.weights_in_window();
  require_weights(table, ks);
  const auto parts = parallel_map<double>(ks.size(), [&](std::size_t i) {
    const int k = ks[i];
    const auto& data = table.at(k);
    CompensatedSum inner;
    for (const auto& f : data.forms) {
      require(f.l_sym2 > 0.0, ErrorKind::missing_data, "L(1, sym^2 f) missing at k=" + std::to_string(k));
      inner.add(f.lambda_at(m) * f.lambda_at(n) / f.l_sym2);
    }
    return 2.0 * w.weight(k) * 2.0 * M_PI * M_PI / (k - 1) * inner.value();
  });
  CompensatedSum total;
  for (double p : parts) total.add(p);
  return total.value();
}

namespace {

double fourth_moment(const Bump& h) {
  static std::mutex mutex;
  static std::map<std::string, double> memo;
  std::ostringstream os;
  for (const auto& c : h.components()) os << format_number(c.weight) << (c.log_scale ? 'L' : 'l') << format_number(c.lo) << ','
                                         << format_number(c.hi) << ';';
  const std::string key = os.str();
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const double v = testfn::fourier_moment(h, 4);
  std::lock_guard lock(mutex);
  memo.emplace(key, v);
  return v;
}

}  // namespace

AveragedRhs averaged_petersson_rhs(int m, int n, const WindowWeights& w) {
  require(m >= 1 && n >= 1, ErrorKind::domain, "m, n must be positive");
  const Bump h = w.effective_window();
  const double scale = w.scale();
  const double root = std::sqrt(static_cast<double>(m) * n);
  AveragedRhs r;
  if (m == n) r.main = testfn::fourier(h, 0.0).real() * scale;

  // hbar decays faster than any power; stop after a run of terms at the
  // quadrature noise floor of hbar.
  const double pref = std::sqrt(M_PI) * std::pow(static_cast<double>(m) * n, -0.25) * scale;
  const double floor = 1e-13 * testfn::hbar_zero(h);
  std::complex<double> acc = 0.0;
  int quiet = 0, c = 1;
  for (; quiet < 10; ++c) {
    require(c < 200000, ErrorKind::truncation, "Kloosterman term did not decay");
    const std::complex<double> hb = testfn::hbar(h, c * scale * scale / (8.0 * M_PI * root));
    quiet = std::abs(hb) < floor ? quiet + 1 : 0;
    if (hb == 0.0) continue;
    acc += expsums::kloosterman(m, n, c) / std::sqrt(static_cast<double>(c)) * expsums::e(2.0 * root / c) * hb;
  }
  r.c_max = c - 1;
  r.kloosterman_term = -pref * (std::polar(1.0, -M_PI / 4.0) * acc).imag();
  r.error_budget = root / std::pow(scale, 4) * fourth_moment(h) + (m == n ? 1.0 : 0.0);
  return r;
}

}  // namespace qvar::trace
