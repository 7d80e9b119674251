#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qvar/testfn/bump.hpp"

namespace qvar::testfn {

using cplx = std::complex<double>;

/// psi~(s) = int_0^inf psi(1/y) y^{s-1} dy, computed as int psi(e^{-u}) e^{su} du.
cplx mellin(const Bump& psi, cplx s);

/// d/ds psi~(s).
cplx mellin_derivative(const Bump& psi, cplx s);

/// Fixed node set for evaluating psi~ at many points with |Im s| <= max_height.
class MellinSampler {
 public:
  MellinSampler(const Bump& psi, double max_height);
  cplx operator()(cplx s) const;
  cplx derivative(cplx s) const;
  double max_height() const { return max_height_; }

 private:
  std::vector<double> u_;
  std::vector<double> amp_;
  std::vector<double> uamp_;
  double max_height_;
};

/// Vertical line Re s = sigma, |Im s| <= height, trapezoid step.
struct ContourSpec {
  double sigma = 1.0;
  double height = 60.0;
  double step = 0.05;

  void validate() const;
};

/// Step min(0.05, 1/(4 log(1/y_min))) and the smallest height with tail < tol.
ContourSpec default_contour(const Bump& psi, double sigma, double y_min, double tail_tol = 1e-10);

struct InversionResult {
  double value = 0.0;
  double tail_estimate = 0.0;
};

/// (1/2 pi i) int_{(sigma)} F(s) y^s ds for F with F(conj s) = conj F(s).
InversionResult mellin_invert(const std::function<cplx(cplx)>& psi_tilde, const ContourSpec& spec,
                              double y, double tail_tolerance = 1e-6);

/// Reusable samples of F along the contour for many y.
class ContourSamples {
 public:
  ContourSamples(const std::function<cplx(cplx)>& f, const ContourSpec& spec);
  InversionResult invert(double y) const;

 private:
  ContourSpec spec_;
  std::vector<double> t_, re_, im_;
  double tail_magnitude_ = 0.0;
};

enum class HbarKind { full, real_part };

/// int_0^inf h(sqrt u)/sqrt(2 pi u) u^{w/2} e^{iuv} du (or with cos(uv)).
cplx hbar(const Bump& h, double v, cplx w = 0.0, HbarKind kind = HbarKind::full);

/// int_0^inf h(sqrt u)/sqrt(2 pi u) du.
double hbar_zero(const Bump& h);

/// Mellin transform of v -> hbar^Re_w(v), 0 < Re s < 1:
/// Gamma(s) cos(pi s/2) int h(sqrt u)/sqrt(2 pi u) u^{w/2 - s} du.
cplx hbar_real_mellin(const Bump& h, cplx w, cplx s);

/// The same expression without the u^{-s} factor.
cplx hbar_real_mellin_without_power(const Bump& h, cplx w, cplx s);

/// Inverse Mellin of a candidate transform at v on Re s = sigma.
double hbar_real_from_mellin(const std::function<cplx(cplx)>& transform, double v, double sigma,
                             double height, double step);

/// h^(xi) = int h(x) e(-x xi) dx.
cplx fourier(const Bump& h, double xi);

/// int |xi|^power |h^(xi)| d xi over the real line (truncated where negligible).
double fourier_moment(const Bump& h, int power);

}  // namespace qvar::testfn
