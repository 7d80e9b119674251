#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <sstream>

#include "qvar/error.hpp"
#include "qvar/mass/report.hpp"
#include "qvar/testfn/bump.hpp"
#include "qvar/variance/variance.hpp"
#include "support.hpp"

using namespace qvar;
using namespace qvar::variance;
using testfn::BumpKind;

namespace {

const Bump kPsi = Bump::canonical(2.0, BumpKind::psi_symmetric);
const Bump kPsi3 = Bump::canonical(3.0, BumpKind::psi_symmetric);
const Bump kWindow = Bump::canonical(2.0, BumpKind::h_window);

WindowWeights shifted(double big_k, const Bump& h = kWindow) { return trace::make_window(big_k, 0.9, h, true); }

const WindowMasses& masses_k40() {
  static const WindowMasses m = [] {
    const WindowWeights w = shifted(40.0);
    return window_masses(w, kPsi, kPsi3, test::table_for(w.weights_in_window()));
  }();
  return m;
}

// Every (n, m) with n(n + m) = N, m != 0, grouped by N, summed without
// grouping tricks or Gaussian cut.
double naive_diagonal(const WindowWeights& w, const Bump& psi1, const Bump& psi2) {
  const double big_k = w.big_k, big_g = w.big_g;
  const double t_lo = w.window.support_lo() + big_k / big_g, t_hi = w.window.support_hi() + big_k / big_g;
  const double x_max = t_hi * big_g + 1.0;
  const int s_max = static_cast<int>(x_max / (2 * M_PI * std::min(psi1.support_lo(), psi2.support_lo()))) + 1;
  std::map<long, std::vector<std::pair<int, int>>> by_n;  // N -> (2n + m, m)
  for (int n = 1; n < s_max; ++n)
    for (int m = 1 - n; 2 * n + m <= s_max; ++m)
      if (m != 0) by_n[static_cast<long>(n) * (n + m)].push_back({2 * n + m, m});
  auto side = [&](const Bump& psi, int s, int m, double x) {
    double acc = 0.0;
    for (int d = 1; d * s * 2 * M_PI * psi.support_lo() < x; ++d) acc += psi(x / (2 * M_PI * d * s)) / d;
    return acc * std::exp(-x * m * m / (2.0 * s * s));
  };
  auto integrand = [&](double t) {
    const double x = t * big_g + 1.0;
    double total = 0.0;
    for (const auto& [n, list] : by_n) {
      double a = 0.0, b = 0.0;
      for (auto [s, m] : list) {
        a += side(psi1, s, m, x);
        b += side(psi2, s, m, x);
      }
      total += a * b / static_cast<double>(n);
    }
    return w.window(t - big_k / big_g) * t * big_g / 16.0 * total;
  };
  return big_g * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, t_lo, t_hi, 12, 1e-13);
}

}  // namespace

TEST_SUITE("variance") {

TEST_CASE("exponent constraints") {
  const ExponentConfig d = ExponentConfig::defaults();
  CHECK(d.constraints_hold());
  CHECK(d.delta > (1 - d.theta + d.eps) / 2);
  CHECK(d.theta > 2.0 / 3 + 4 * d.eta / 3 + d.eps);
  CHECK(d.theta + d.eta - d.delta > 1);
  ExponentConfig wide = d;
  wide.eps = 0.05;
  CHECK_FALSE(wide.constraints_hold());
  CHECK_THROWS_AS(wide.validate(), Error);
}

TEST_CASE("window and bump preconditions") {
  const auto plain = trace::make_window(40.0, 0.9, kWindow, false);
  CHECK_THROWS_AS(require_shifted(plain), Error);
  const WindowWeights w = shifted(40.0);
  try {
    (void)variance_empirical(w, kWindow, kPsi, test::table_for(w.weights_in_window()));
    FAIL("expected a symmetry error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symmetry);
  }
}

TEST_CASE("empirical variance") {
  const WindowWeights w = shifted(40.0);
  const auto& m = masses_k40();
  REQUIRE(!m.first.empty());
  CHECK(variance_empirical(w, m.first, m.first) >= 0.0);
  const double ab = variance_empirical(w, m.first, m.second), ba = variance_empirical(w, m.second, m.first);
  CHECK(std::abs(ab - ba) <= 1e-12 * std::abs(ab));
  CHECK(variance_empirical(w, {}, {}) == 0.0);

  auto doubled = m.first;
  for (auto& r : doubled) {
    r.mu *= 2;
    r.expected *= 2;
  }
  CHECK(std::abs(variance_empirical(w, doubled, m.second) - 2 * ab) <= 1e-12 * std::abs(ab));
}

TEST_CASE("variance re-assembles from the mass table") {
  const WindowWeights w = shifted(40.0);
  const auto& m = masses_k40();
  std::stringstream a, b;
  mass::write_csv(a, m.first);
  mass::write_csv(b, m.second);
  const auto r1 = mass::read_csv(a), r2 = mass::read_csv(b);
  double total = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i)
    total += w.weight(r1[i].k) * r1[i].l_sym2 * (r1[i].mu - r1[i].expected) * (r2[i].mu - r2[i].expected);
  const double lhs = variance_empirical(w, m.first, m.second);
  CHECK(std::abs(total - lhs) <= 1e-10 * std::abs(lhs));
}

TEST_CASE("census") {
  const WindowWeights w = shifted(40.0);
  const auto& m = masses_k40();
  long dims = 0;
  for (int k : w.weights_in_window()) dims += test::cusp_dim(k);
  const Census all = que_census(w, m.first, 0.05, 0.0);
  CHECK(all.total == dims);
  CHECK(all.exceeders == all.total);
  CHECK(que_census(w, m.first, 0.05, INFINITY).exceeders == 0);
  const Census def = que_census(w, m.first, 0.05);
  CHECK(std::abs(def.threshold - std::pow(40.0, -0.2)) < 1e-15);
  CHECK(def.fraction >= 0.0);
  CHECK(def.fraction <= 1.0);
}

TEST_CASE("cauchy-schwarz assembly") {
  const WindowWeights w = shifted(40.0);
  const auto& m = masses_k40();
  const CauchySchwarz cs = cauchy_schwarz(w, m.first, m.second);
  CHECK(cs.gap <= cs.bound * (1 + 1e-12));
  CHECK(std::abs(cs.empirical - variance_empirical(w, m.first, m.second)) == 0.0);
}

TEST_CASE("diagonal term against plain enumeration") {
  const WindowWeights w = shifted(40.0);
  const DiagonalNumeric d = diagonal_numeric(w, kPsi, kPsi3);
  const double ref = naive_diagonal(w, kPsi, kPsi3);
  CHECK(std::abs(d.value - ref) < 1e-8 * std::abs(ref));
  CHECK(std::abs(diagonal_numeric(w, kPsi.scaled(2.0), kPsi3).value - 2 * d.value) < 1e-12 * std::abs(d.value));
  CHECK(std::abs(d.value - diagonal_numeric(w, kPsi3, kPsi).value) < 1e-12 * std::abs(d.value));
  CHECK(diagonal_numeric(w, Bump::window(6.0, 7.0), kPsi).value == 0.0);
}

TEST_CASE("diagonal term is stable under the Gaussian cut") {
  const WindowWeights w = shifted(200.0);
  DiagonalOptions wide;
  wide.gauss_cut = 80.0;
  const double a = diagonal_numeric(w, kPsi, kPsi).value, b = diagonal_numeric(w, kPsi, kPsi, wide).value;
  CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
}

TEST_CASE("asymptotic and main terms") {
  const WindowWeights w = shifted(400.0);
  const MellinData md = mellin_data(kPsi, kPsi);
  const DiagonalAsymptotic plain = diagonal_asymptotic(w, md, false);
  const MainTerm main = variance_main_term(w, md);
  CHECK(plain.terms[1] == 0.0);
  CHECK(std::abs(main.terms[0] - plain.terms[0]) < 1e-10 * std::abs(main.terms[0]));
  CHECK(std::abs(main.terms[2] - plain.terms[3]) < 1e-10 * std::abs(main.terms[0]));
  CHECK(std::abs(main.value - plain.value) < 1e-10 * std::abs(main.terms[0]));

  const MainTerm twice = variance_main_term(shifted(400.0, kWindow.scaled(2.0)), md);
  CHECK(std::abs(twice.value - 2 * main.value) < 1e-12 * std::abs(main.value));

  CHECK(std::abs(zeta_line_integral(kPsi, kPsi, md.line_height) - zeta_line_integral(kPsi, kPsi, 2 * md.line_height)) <
        1e-8 * std::abs(md.line_integral));
}

TEST_CASE("mean-zero test functions keep only the line term") {
  const Bump zero = Bump::mean_zero(2.0, 3.0);
  const WindowWeights w = shifted(400.0);
  const MellinData md = mellin_data(zero, kPsi);
  CHECK(std::abs(md.psi1_at_0) < 1e-13);
  const MainTerm main = variance_main_term(w, md);
  CHECK(std::abs(main.terms[0]) < 1e-10 * std::abs(main.terms[2]));
  CHECK(std::abs(main.terms[1]) < 1e-10 * std::abs(main.terms[2]));
  const DiagonalAsymptotic asym = diagonal_asymptotic(w, md);
  CHECK(std::abs(asym.value - asym.terms[3]) < 1e-10 * std::abs(asym.terms[3]));
}

TEST_CASE("off-diagonal phase") {
  for (double n : {1.0, 7.0, 300.0})
    for (double m : {1.0, 4.0, 11.0}) CHECK(std::abs(od_phase(n, n, m, m)) < 1e-9 * n * n);
  for (double v : {0.0, 1e-3, -2e-3}) {
    const double x = od_stationary_point(v, 1000.0, 7.0, 5.0);
    CHECK(std::abs(od_phase_slope(x, 1000.0, 7.0, 5.0, v)) < 1e-8);
  }
  CHECK(std::abs(od_stationary_point(0.0, 1000.0, 7.0, 5.0) - 1400.0) < 1e-8);
  const double h = 1e-3, x = 900.0;
  const double fd = (od_phase(x + h, 1000.0, 7.0, 5.0) - od_phase(x - h, 1000.0, 7.0, 5.0)) / (2 * h);
  CHECK(std::abs(fd - od_phase_slope(x, 1000.0, 7.0, 5.0)) < 1e-6);
}

TEST_CASE("off-diagonal probe cost guard") {
  try {
    (void)od_probe(shifted(600.0), kPsi, kPsi, ExponentConfig::defaults());
    FAIL("expected a cost-guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cost_guard);
  }
}

TEST_CASE("off-diagonal probe trend") {
  double prev = INFINITY;
  for (double big_k : {60.0, 120.0, 240.0}) {
    const OdProbe p = od_probe(shifted(big_k), kPsi, kPsi, ExponentConfig::defaults());
    CHECK(p.max_stationary_residual < 1e-8);
    CHECK_MESSAGE(p.normalized <= prev, "K=" << big_k << " normalized " << p.normalized << " previous " << prev);
    prev = p.normalized;
  }
}

TEST_CASE("report json is deterministic") {
  const WindowWeights w = shifted(40.0);
  const auto table = test::table_for(w.weights_in_window());
  const std::string a = to_json(variance_report(w, kPsi, kPsi, table));
  const std::string b = to_json(variance_report(w, kPsi, kPsi, table));
  CHECK(a == b);
  CHECK(a.find("\"od_probe\"") != std::string::npos);
}

}
