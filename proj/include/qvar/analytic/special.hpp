#pragma once

#include <complex>

namespace qvar::analytic {

using cplx = std::complex<double>;

inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double pi = 3.14159265358979323846;

/// log Gamma(s) on some branch; exp(log_gamma(s)) == Gamma(s).
cplx log_gamma(cplx s);
cplx gamma(cplx s);

/// log sin(pi*s), stable for large |Im s|.
cplx log_sin_pi(cplx s);

/// Riemann zeta. Euler-Maclaurin on Re s >= 0, functional equation below.
cplx zeta(cplx s);

/// Euler-Maclaurin summation without any reflection, valid for Re s > -20.
cplx zeta_euler_maclaurin(cplx s);

/// Value of the functional-equation route 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s).
cplx zeta_reflected(cplx s);

/// J_order(x) = mantissa * exp(log_scale).
struct ScaledReal {
  double mantissa = 0.0;
  double log_scale = 0.0;
  double value() const;
};

ScaledReal bessel_j_scaled(int order, double x);

}  // namespace qvar::analytic
