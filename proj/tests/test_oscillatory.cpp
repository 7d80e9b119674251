#include <doctest.h>

#include <cmath>
#include <random>

#include "qvar/error.hpp"
#include "qvar/oscillatory/oscillatory.hpp"
#include "qvar/testfn/bump.hpp"
#include "qvar/testfn/jet.hpp"

using namespace qvar;
using namespace qvar::oscillatory;

namespace {

const testfn::Bump kAmp = testfn::Bump::window(1.0, 3.0);

PhaseProblem quadratic(double big_y, double sign = 1.0) {
  PhaseProblem p;
  p.amplitude = [](double t, int j) { return kAmp.derivative(t + 2.0, j); };
  p.phase = [=](double t, int j) {
    const double c = sign * big_y;
    return j == 0 ? c * t * t : j == 1 ? 2 * c * t : j == 2 ? 2 * c : 0.0;
  };
  p.lo = -1.0;
  p.hi = 1.0;
  p.v1_scale = 2.0;
  p.y_scale = big_y;
  return p;
}

PhaseProblem linear(double slope) {
  PhaseProblem p = quadratic(1.0);
  p.phase = [=](double t, int j) { return j == 0 ? slope * t : j == 1 ? slope : 0.0; };
  p.r_scale = slope;
  return p;
}

}  // namespace

TEST_SUITE("oscillatory") {

TEST_CASE("faa di bruno partitions") {
  const int counts[] = {1, 2, 3, 5, 7, 11};
  for (int n = 1; n <= 6; ++n) CHECK(faa_di_bruno_terms(n).size() == static_cast<std::size_t>(counts[n - 1]));
}

TEST_CASE("faa di bruno against jet arithmetic") {
  for (double t : {0.0, 0.3, 0.7, -1.1}) {
    const testfn::Jet x = testfn::Jet::variable(t);
    const testfn::Jet composed = testfn::exp(x * x * x);
    const double e = std::exp(t * t * t);
    const std::vector<double> p(7, e);
    const std::vector<double> q = {0.0, 3 * t * t, 6 * t, 6.0, 0.0, 0.0, 0.0};
    for (int n = 1; n <= 6; ++n) {
      const double ref = composed.derivative(n);
      CHECK(std::abs(faa_di_bruno(p, q, n) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
  // exp(3t) at t = 0: 3^n
  const std::vector<double> p(6, 1.0), q = {0.0, 3.0, 0.0, 0.0, 0.0, 0.0};
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(faa_di_bruno(p, q, n) - std::pow(3.0, n)) < 1e-12);
}

TEST_CASE("poisson summation on residue classes") {
  auto gauss = [](double x) { return std::exp(-M_PI * x * x); };
  const auto self = poisson_on_class(gauss, 1, 0);
  CHECK(std::abs(self.direct - self.dual) < 1e-10);
  const auto three = poisson_on_class(gauss, 3, 1);
  CHECK(std::abs(three.direct - three.dual) < 1e-9);
  CHECK(std::abs(poisson_on_class(gauss, 3, 4).direct - three.direct) < 1e-15);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> cd(1, 12), ad(-30, 30);
  std::uniform_real_distribution<double> wd(0.3, 3.0), sd(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const int c = cd(rng), a = ad(rng);
    const double width = wd(rng), shift = sd(rng);
    auto f = [=](double x) { return std::exp(-M_PI * (x - shift) * (x - shift) / (width * width)); };
    const auto r = poisson_on_class(f, c, a);
    CHECK_MESSAGE(std::abs(r.direct - r.dual) < 1e-9 * std::max(1.0, std::abs(r.direct)), "c=" << c << " a=" << a);
  }
}

TEST_CASE("first-derivative test") {
  std::vector<double> scaled;
  for (double slope : {100.0, 200.0, 400.0, 800.0, 1600.0}) {
    const auto r = nonstationary_bound_check(linear(slope), 2);
    scaled.push_back(std::abs(r.integral) * std::pow(slope, 3));
  }
  for (std::size_t i = 1; i < scaled.size(); ++i) CHECK(scaled[i] < scaled[i - 1]);

  PhaseProblem zero = linear(50.0);
  zero.amplitude = [](double, int) { return 0.0; };
  CHECK(std::abs(oscillatory_integral(zero, 1.0)) == 0.0);

  try {
    (void)nonstationary_bound_check(quadratic(5.0), 2);
    FAIL("expected a derivative-floor error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::derivative_floor);
  }
}

TEST_CASE("stationary phase on quadratic phases") {
  const StationaryPhase one = stationary_phase_eval(quadratic(1.0));
  CHECK(std::abs(one.t0) < 1e-12);
  CHECK(std::abs(one.main - std::polar(1.0, M_PI / 4) * kAmp(2.0) / std::sqrt(2.0)) < 1e-14);

  double prev_error = INFINITY;
  for (double big_y : {10.0, 40.0, 160.0, 640.0}) {
    const StationaryPhase r = stationary_phase_eval(quadratic(big_y));
    const double error = std::abs(r.direct - r.main);
    CHECK_MESSAGE(error <= 10.0 * r.err_envelope, "Y=" << big_y);
    CHECK(error <= prev_error / 2.0);
    prev_error = error;
    const StationaryPhase mirrored = stationary_phase_eval(quadratic(big_y, -1.0));
    CHECK(std::abs(std::abs(mirrored.main) - std::abs(r.main)) < 1e-14);
    CHECK(std::abs(mirrored.direct - std::conj(r.direct)) < 1e-12);
  }
  const StationaryPhase big = stationary_phase_eval(quadratic(400.0));
  CHECK(std::abs(big.direct) <= big.trivial_bound);
}

TEST_CASE("stationary point preconditions") {
  try {
    (void)stationary_point(linear(5.0));
    FAIL("expected no-stationary-point");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_stationary_point);
  }
  PhaseProblem two = quadratic(1.0);
  two.phase = [](double t, int j) {
    return j == 0 ? std::cos(4 * M_PI * t) : j == 1 ? -4 * M_PI * std::sin(4 * M_PI * t) : -16 * M_PI * M_PI * std::cos(4 * M_PI * t);
  };
  two.lo = -0.9;
  two.hi = 0.9;
  try {
    (void)stationary_point(two);
    FAIL("expected multiple-stationary-points");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::multiple_stationary_points);
  }
}

}
