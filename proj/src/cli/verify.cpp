#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "qvar/cli/commands.hpp"
#include "qvar/error.hpp"
#include "qvar/expsums/arithmetic.hpp"
#include "qvar/expsums/kloosterman.hpp"
#include "qvar/format.hpp"
#include "qvar/mass/mass.hpp"
#include "qvar/oscillatory/oscillatory.hpp"
#include "qvar/quadrature.hpp"
#include "qvar/testfn/transforms.hpp"
#include "qvar/trace/petersson.hpp"

namespace qvar::cli {

namespace {

CheckResult check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

std::vector<CheckResult> kloosterman_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  for (int c = 1; c <= 12; ++c) {
    const double lhs = expsums::kloosterman_identity_lhs(c);
    const double rhs = std::pow(double(c), 3) * double(expsums::euler_phi(c));
    out.push_back(check("identity c=" + std::to_string(c), std::abs(lhs - rhs) / rhs, 1e-6 * cfg.tolerance_scale));
  }
  double weil = 0.0;
  for (int c = 1; c <= 200; ++c)
    for (int m : {1, 2, 5, 12})
      for (int n : {1, 3, 7}) {
        const double s = expsums::kloosterman(m, n, c);
        const double bound = double(expsums::divisor_count(c)) * std::sqrt(double(std::gcd(std::gcd(m, n), c))) *
                             std::sqrt(double(c));
        weil = std::max(weil, std::abs(s) - bound);
      }
  out.push_back(check("weil bound c<=200", std::max(weil, 0.0), 1e-9 * cfg.tolerance_scale));
  double crt = 0.0;
  for (auto [c1, c2] : std::vector<std::pair<int, int>>{{7, 9}, {8, 25}, {11, 16}, {27, 49}})
    for (int m : {1, 3, 10})
      crt = std::max(crt, std::abs(expsums::kloosterman_crt(m, 5, c1, c2) -
                                   expsums::kloosterman_direct(m, 5, std::int64_t(c1) * c2)));
  out.push_back(check("crt factorization", crt, 1e-9 * cfg.tolerance_scale));
  return out;
}

std::vector<CheckResult> petersson_suite(const RunConfig& cfg) {
  std::vector<int> weights = cfg.weight_list();
  if (weights.empty()) weights = parse_weights("12-30");
  const trace::WeightTable table = load_table(cfg, weights, false);
  std::vector<CheckResult> out;
  for (int k : weights) {
    double worst = 0.0;
    for (int m = 1; m <= 10; ++m)
      for (int n = 1; n <= 10; ++n) {
        const auto r = trace::exact_petersson_check(table.at(k), m, n);
        worst = std::max(worst, std::abs(r.lhs - r.rhs));
      }
    out.push_back(check("exact closure k=" + std::to_string(k) + " m,n<=10", worst, 1e-8 * cfg.tolerance_scale));
  }
  return out;
}

// Integration by parts: with g(u) = psi(e^{-u}) e^{sigma u},
// |psi~(sigma+it)| (1+|t|)^j <= 2^{j-1} (int |g| + int |g^(j)|).
double mellin_decay_constant(const testfn::Bump& psi, int order, double sigma) {
  auto g_derivative = [&](double u) {
    const double y0 = std::exp(-u);
    const testfn::Jet inner = psi.jet(y0);
    testfn::Jet delta, power = testfn::Jet::constant(1.0), outer;
    double fact = 1.0;
    for (int j = 1; j <= testfn::Jet::kOrder; ++j) {
      fact *= j;
      delta.c[j] = y0 * (j % 2 ? -1.0 : 1.0) / fact;
    }
    for (int m = 0; m <= testfn::Jet::kOrder; ++m) {
      outer = outer + inner.c[m] * power;
      power = power * delta;
    }
    testfn::Jet weight;
    fact = 1.0;
    for (int j = 0; j <= testfn::Jet::kOrder; ++j) {
      if (j) fact *= j;
      weight.c[j] = std::exp(sigma * u) * std::pow(sigma, j) / fact;
    }
    return (outer * weight).derivative(order);
  };
  const double a = -std::log(psi.support_hi()), b = -std::log(psi.support_lo());
  const double base = quad::integrate([&](double u) { return std::abs(psi(std::exp(-u))) * std::exp(sigma * u); }, a, b, 64);
  const double top = quad::integrate([&](double u) { return std::abs(g_derivative(u)); }, a, b, 64);
  return std::pow(2.0, order - 1) * (base + top);
}

std::vector<CheckResult> mellin_suite(const RunConfig& cfg) {
  using testfn::cplx;
  const testfn::Bump psi = cfg.psi();
  const double lo = psi.support_lo(), hi = psi.support_hi();
  std::vector<CheckResult> out;

  const testfn::MellinSampler sampler(psi, 2000.0);
  const auto spec = testfn::default_contour(psi, cfg.contour_sigma, lo, 1e-10);
  const testfn::ContourSamples samples([&](cplx s) { return sampler(s); }, spec);
  double round_trip = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double y = lo * std::pow(hi / lo, (i + 0.5) / 50.0);
    round_trip = std::max(round_trip, std::abs(samples.invert(y).value - psi(y)));
  }
  out.push_back(check("round trip 50 points", round_trip, 1e-6 * cfg.tolerance_scale));

  if (psi.symmetric()) {
    double sym = 0.0;
    for (double sigma : {0.0, 0.5, 1.0, 2.0})
      for (double t : {0.0, 0.7, 3.0, 11.0, 40.0})
        sym = std::max(sym, std::abs(testfn::mellin(psi, {sigma, t}) - testfn::mellin(psi, {-sigma, -t})));
    out.push_back(check("symmetry", sym, 1e-10 * cfg.tolerance_scale));
  }

  const double bound = mellin_decay_constant(psi, 4, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 100.0 * i / 1000.0;
    worst = std::max(worst, std::abs(sampler({1.0, t})) * std::pow(1.0 + t, 4));
  }
  out.push_back(check("decay j=4 on [0,100]", worst, bound * cfg.tolerance_scale));
  return out;
}

std::vector<CheckResult> shifted_suite(const RunConfig& cfg) {
  std::vector<int> weights = cfg.weight_list();
  if (weights.empty()) weights = parse_weights("12-60:4");
  const trace::WeightTable table = load_table(cfg, weights, false);
  const testfn::Bump psi = cfg.psi();
  std::vector<CheckResult> out;
  std::map<int, double> residual;
  for (int k : weights) {
    double worst = 0.0;
    for (const auto& f : table.at(k).forms)
      worst = std::max(worst, std::abs(mass::s_psi_direct(f, psi) - mass::s_psi_approx(f, psi)));
    residual[k] = worst;
    out.push_back(check("shifted k=" + std::to_string(k), worst,
                        10.0 * std::pow(double(k), -0.5 + 0.05) * cfg.tolerance_scale));
  }
  // trend over dyadic blocks [k0 2^j, k0 2^{j+1}) of the weight grid
  std::vector<double> blocks;
  const int base = residual.begin()->first;
  for (const auto& [k, r] : residual) {
    const auto j = static_cast<std::size_t>(std::floor(std::log2(double(k) / base)));
    if (blocks.size() <= j) blocks.resize(j + 1, 0.0);
    blocks[j] = std::max(blocks[j], r);
  }
  for (std::size_t j = 1; j < blocks.size(); ++j)
    out.push_back(check("dyadic block " + std::to_string(j - 1) + "->" + std::to_string(j),
                        std::max(0.0, blocks[j] - blocks[j - 1]), 0.0));
  return out;
}

}  // namespace

oscillatory::PhaseProblem fresnel_problem(double big_y) {
  oscillatory::PhaseProblem p;
  const testfn::Bump bump = testfn::Bump::window(1.0, 3.0);
  p.amplitude = [bump](double t, int j) { return bump.derivative(t + 2.0, j); };
  p.phase = [big_y](double t, int j) { return j == 0 ? big_y * t * t : j == 1 ? 2.0 * big_y * t : j == 2 ? 2.0 * big_y : 0.0; };
  p.lo = -1.0;
  p.hi = 1.0;
  p.x_scale = 1.0;
  p.v_scale = 1.0;
  p.v1_scale = 2.0;
  p.y_scale = big_y;
  p.q_scale = 1.0;
  return p;
}

std::vector<oscillatory::PhaseProblem> random_phase_problems(int count, unsigned seed, bool stationary) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<oscillatory::PhaseProblem> out;
  for (int i = 0; i < count; ++i) {
    oscillatory::PhaseProblem p;
    const double width = 0.5 + 0.5 * unit(rng);
    const double center = (unit(rng) - 0.5) * width;
    const testfn::Bump bump = testfn::Bump::window(center - width + 4.0, center + width + 4.0);
    p.amplitude = [bump](double t, int j) { return bump.derivative(t + 4.0, j); };
    p.lo = center - width;
    p.hi = center + width;
    p.x_scale = 1.0;
    p.v_scale = width;
    p.u_scale = width;
    p.v1_scale = 2.0 * width;
    p.q_scale = 1.0;
    if (stationary) {
      const double big_y = std::pow(10.0, 1.0 + 2.0 * unit(rng));
      const double cubic = unit(rng) - 0.5;  // second critical point at -2/cubic, outside the support
      p.phase = [big_y, cubic](double t, int j) {
        switch (j) {
          case 0: return big_y * (t * t / 2.0 + cubic * t * t * t / 6.0);
          case 1: return big_y * (t + cubic * t * t / 2.0);
          case 2: return big_y * (1.0 + cubic * t);
          case 3: return big_y * cubic;
          default: return 0.0;
        }
      };
      p.y_scale = big_y;
    } else {
      const double slope = 20.0 + 480.0 * unit(rng);
      p.phase = [slope](double t, int j) { return j == 0 ? slope * t : j == 1 ? slope : 0.0; };
      p.y_scale = slope;
      p.r_scale = slope;
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::vector<CheckResult> stationary_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  for (double big_y : {10.0, 40.0, 160.0, 640.0}) {
    const auto r = oscillatory::stationary_phase_eval(fresnel_problem(big_y));
    out.push_back(check("fresnel Y=" + format_number(big_y), std::abs(r.direct - r.main),
                        10.0 * r.err_envelope * cfg.tolerance_scale));
  }
  const auto stationary = random_phase_problems(20, 20240611u, true);
  for (std::size_t i = 0; i < stationary.size(); ++i) {
    const auto r = oscillatory::stationary_phase_eval(stationary[i]);
    out.push_back(check("random stationary " + std::to_string(i), std::abs(r.direct - r.main),
                        10.0 * r.err_envelope * cfg.tolerance_scale));
  }
  const auto moving = random_phase_problems(20, 20240612u, false);
  for (std::size_t i = 0; i < moving.size(); ++i) {
    const auto r = oscillatory::nonstationary_bound_check(moving[i], 2);
    out.push_back(check("random nonstationary " + std::to_string(i), std::abs(r.integral),
                        10.0 * r.envelope * cfg.tolerance_scale));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite, const RunConfig& cfg) {
  if (suite == "kloosterman") return kloosterman_suite(cfg);
  if (suite == "petersson") return petersson_suite(cfg);
  if (suite == "mellin") return mellin_suite(cfg);
  if (suite == "shifted") return shifted_suite(cfg);
  if (suite == "stationary") return stationary_suite(cfg);
  raise(ErrorKind::usage, "unknown suite '" + suite + "'");
}

}  // namespace qvar::cli
