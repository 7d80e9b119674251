#include <cmath>

#include "qvar/analytic/special.hpp"
#include "qvar/error.hpp"

namespace qvar::analytic {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLogPi = 1.14472988584940017414;

// B_{2k} / (2k (2k-1)), k = 1..8.
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,    1.0 / 156.0,       -3617.0 / 122400.0,
};

bool is_nonpositive_integer(cplx s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

cplx stirling(cplx s) {
  cplx r = (s - 0.5) * std::log(s) - s + kLogSqrt2Pi;
  const cplx inv = 1.0 / s;
  const cplx inv2 = inv * inv;
  cplx p = inv;
  for (double c : kStirling) {
    r += c * p;
    p *= inv2;
  }
  return r;
}

}  // namespace

cplx log_sin_pi(cplx s) {
  const double t = s.imag();
  if (std::abs(t) < 2.0) return std::log(std::sin(pi * s));
  if (t < 0.0) return std::conj(log_sin_pi(std::conj(s)));
  // sin(pi s) = e^{-i pi s} (e^{2 pi i s} - 1) / (2i), |e^{2 pi i s}| = e^{-2 pi t}
  const cplx i(0.0, 1.0);
  return -i * pi * s + std::log((std::exp(2.0 * pi * i * s) - 1.0) / (2.0 * i));
}

cplx log_gamma(cplx s) {
  if (is_nonpositive_integer(s)) raise(ErrorKind::pole, "Gamma has a pole at s = " + std::to_string(s.real()));
  if (s.real() < 0.5) return kLogPi - log_sin_pi(s) - log_gamma(1.0 - s);
  cplx shift = 0.0;
  cplx prod = 1.0;
  int count = 0;
  while (s.real() < 20.0) {
    prod *= s;
    s += 1.0;
    if (++count == 8) {
      shift += std::log(prod);
      prod = 1.0;
      count = 0;
    }
  }
  if (count > 0) shift += std::log(prod);
  return stirling(s) - shift;
}

cplx gamma(cplx s) {
  const cplx l = log_gamma(s);
  require(l.real() < 709.0, ErrorKind::overflow, "Gamma overflows double; use log_gamma");
  if (s.imag() == 0.0 && s.real() > 0.0) return std::exp(l.real());
  return std::exp(l);
}

}  // namespace qvar::analytic
