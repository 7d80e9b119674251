#include <cmath>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"

namespace qvar::analytic {

namespace {

using lcplx = std::complex<long double>;

// B_{2k} / (2k)!, k = 1..10.
constexpr long double kBernoulliOverFactorial[] = {
    8.33333333333333333333e-2L,  -1.38888888888888888889e-3L, 3.30687830687830687831e-5L,
    -8.26719576719576719577e-7L, 2.08767569878680989792e-8L,  -5.28419013868749318485e-10L,
    1.33825365306846788329e-11L, -3.38968029632258286684e-13L, 8.58606205627784456414e-15L,
    -2.17486869855806187305e-16L,
};

}  // namespace

cplx zeta_euler_maclaurin(cplx s_in) {
  require(!(s_in.real() == 1.0 && s_in.imag() == 0.0), ErrorKind::pole, "zeta has a pole at s = 1");
  const lcplx s(s_in.real(), s_in.imag());
  const int n_terms = std::max(20, static_cast<int>(std::ceil(2.0 * std::abs(s_in.imag()))));
  lcplx sum = 0.0L;
  for (int n = n_terms - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<long double>(n)));
  const long double big_n = n_terms;
  const long double log_n = std::log(big_n);
  const lcplx n_pow = std::exp(-s * log_n);
  sum += n_pow * big_n / (s - 1.0L) + 0.5L * n_pow;
  // Tail corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  lcplx rising = s;
  lcplx power = n_pow / big_n;
  const long double inv_n2 = 1.0L / (big_n * big_n);
  for (int k = 0; k < 10; ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + static_cast<long double>(2 * k + 1)) * (s + static_cast<long double>(2 * k + 2));
    power *= inv_n2;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

cplx zeta_reflected(cplx s) {
  require(!(s.real() == 0.0 && s.imag() == 0.0), ErrorKind::domain,
          "functional-equation route is singular at s = 0");
  if (s.imag() == 0.0 && s.real() < 0.0 && std::fmod(s.real(), 2.0) == 0.0) return 0.0;
  const cplx other = zeta_euler_maclaurin(1.0 - s);
  const cplx log_rest = s * std::log(2.0) + (s - 1.0) * std::log(pi) + log_sin_pi(0.5 * s) +
                        log_gamma(1.0 - s);
  return std::exp(log_rest) * other;
}

cplx zeta(cplx s) {
  if (s.real() >= 0.0) return zeta_euler_maclaurin(s);
  return zeta_reflected(s);
}

}  // namespace qvar::analytic
