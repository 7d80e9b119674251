#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace qvar::oscillatory {

using cplx = std::complex<double>;

/// Amplitude and phase given through their derivatives (order 0 = value),
/// supported on [lo, hi], with the scales of the derivative tests.
struct PhaseProblem {
  std::function<double(double, int)> amplitude;
  std::function<double(double, int)> phase;
  double lo = 0.0;
  double hi = 1.0;
  double x_scale = 1.0;   // X: amplitude size
  double u_scale = 1.0;   // U: amplitude derivative scale (first-derivative test)
  double v_scale = 1.0;   // V: amplitude derivative scale (stationary phase)
  double v1_scale = 1.0;  // V1: support length
  double y_scale = 1.0;   // Y: phase size
  double q_scale = 1.0;   // Q: phase derivative scale
  double r_scale = 1.0;   // R: lower bound for |phase'|
};

/// |amplitude^(j)| <= 2 X scale^{-j} for j <= 4 on a 50-point grid.
bool amplitude_bounds_hold(const PhaseProblem& p, double scale);

/// int amplitude(t) e^{i freq phase(t)} dt, panels no wider than a quarter of
/// the local period.
cplx oscillatory_integral(const PhaseProblem& p, double freq);

struct NonstationaryCheck {
  cplx integral;
  double envelope = 0.0;
};
/// int h e^{i f}; envelope (beta - alpha) X [(Q R / sqrt Y)^{-A} + (R U)^{-A}].
NonstationaryCheck nonstationary_bound_check(const PhaseProblem& p, int big_a);

struct StationaryPhase {
  cplx main;
  cplx direct;
  double err_envelope = 0.0;
  double trivial_bound = 0.0;
  double t0 = 0.0;
  bool hypotheses_hold = false;
};
/// int h e^{2 pi i f} against its leading stationary-phase term.
StationaryPhase stationary_phase_eval(const PhaseProblem& p);

/// Unique zero of phase' in (lo, hi): bisection to 1e-12, one Newton step.
double stationary_point(const PhaseProblem& p);

/// n-th derivative of p(q(t)) from p_derivs[m] = p^(m)(q(t)) and
/// q_derivs[j] = q^(j)(t) (index 0 unused).
double faa_di_bruno(std::span<const double> p_derivs, std::span<const double> q_derivs, int n);

/// Solutions (k_1..k_n) of k_1 + 2 k_2 + ... + n k_n = n.
std::vector<std::vector<int>> faa_di_bruno_terms(int n);

struct PoissonSides {
  double direct = 0.0;
  double dual = 0.0;
  int direct_terms = 0;
  int dual_terms = 0;
};
/// sum_{n = a mod c} f(n) against (1/c) sum_n f^(n/c) e_c(a n).
PoissonSides poisson_on_class(const std::function<double(double)>& f, int c, int a);

}  // namespace qvar::oscillatory
