#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qvar/testfn/jet.hpp"

namespace qvar::testfn {

enum class BumpKind { psi_symmetric, h_window };

/// weight * exp(-1 / (1 - t^2)) on |t| < 1, where t is affine in log y
/// (log_scale) or in y, mapping (lo, hi) onto (-1, 1).
struct BumpComponent {
  double weight = 1.0;
  bool log_scale = true;
  double lo = 0.5;
  double hi = 2.0;
};

class Bump {
 public:
  Bump() = default;
  Bump(std::vector<BumpComponent> components, bool symmetric, std::string family, double alpha);

  /// exp(-1/(1-t^2)) with t = log y / log alpha (psi_symmetric) or the same
  /// profile on (1, 2) (h_window).
  static Bump canonical(double alpha, BumpKind kind);

  /// Window profile on (a, b).
  static Bump window(double a, double b);

  /// Symmetric bump with int psi dy/y = 0: canonical(alpha) - c * canonical(beta).
  static Bump mean_zero(double alpha, double beta);

  double operator()(double y) const;
  double derivative(double y, int order) const;
  Jet jet(double y) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  bool symmetric() const { return symmetric_; }
  double alpha() const { return alpha_; }
  const std::string& family() const { return family_; }
  std::string descriptor() const;
  const std::vector<BumpComponent>& components() const { return parts_; }

  Bump scaled(double factor) const;
  Bump plus(const Bump& other) const;

  /// Max |psi(y) - psi(1/y)| over a fixed grid inside the support.
  double symmetry_defect() const;

 private:
  std::vector<BumpComponent> parts_;
  bool symmetric_ = false;
  std::string family_;
  double alpha_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Profile exp(-1/(1-t^2)) and its jet in t.
double profile(double t);

}  // namespace qvar::testfn
