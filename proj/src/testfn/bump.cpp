#include "qvar/testfn/bump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qvar/format.hpp"
#include "qvar/error.hpp"

namespace qvar::testfn {

double profile(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

namespace {

Jet profile_jet(const Jet& t) {
  if (!(std::abs(t.c[0]) < 1.0)) return Jet{};
  const Jet u = Jet::constant(1.0) - t * t;
  return exp(-1.0 * recip(u));
}

Jet argument_jet(const BumpComponent& p, double y) {
  if (p.log_scale) {
    const double mid = 0.5 * (std::log(p.hi) + std::log(p.lo));
    const double half = 0.5 * (std::log(p.hi) - std::log(p.lo));
    return (1.0 / half) * (log(Jet::variable(y)) - Jet::constant(mid));
  }
  return (2.0 / (p.hi - p.lo)) * (Jet::variable(y) - Jet::constant(0.5 * (p.hi + p.lo)));
}

double argument(const BumpComponent& p, double y) {
  if (p.log_scale) {
    if (y <= 0.0) return std::numeric_limits<double>::infinity();
    const double mid = 0.5 * (std::log(p.hi) + std::log(p.lo));
    const double half = 0.5 * (std::log(p.hi) - std::log(p.lo));
    return (std::log(y) - mid) / half;
  }
  return (2.0 * y - p.hi - p.lo) / (p.hi - p.lo);
}

}  // namespace

Bump::Bump(std::vector<BumpComponent> components, bool symmetric, std::string family, double alpha)
    : parts_(std::move(components)), symmetric_(symmetric), family_(std::move(family)), alpha_(alpha) {
  require(!parts_.empty(), ErrorKind::domain, "bump needs at least one component");
  lo_ = std::numeric_limits<double>::infinity();
  hi_ = 0.0;
  for (const auto& p : parts_) {
    require(p.lo > 0.0 && p.hi > p.lo, ErrorKind::domain, "bump support must be an interval in (0, inf)");
    lo_ = std::min(lo_, p.lo);
    hi_ = std::max(hi_, p.hi);
  }
}

Bump Bump::canonical(double alpha, BumpKind kind) {
  require(alpha > 1.0, ErrorKind::domain, "bump parameter alpha must exceed 1");
  if (kind == BumpKind::psi_symmetric)
    return Bump({{1.0, true, 1.0 / alpha, alpha}}, true, "psi_symmetric", alpha);
  return Bump({{1.0, false, 1.0, 2.0}}, false, "h_window", alpha);
}

Bump Bump::window(double a, double b) {
  require(a > 0.0 && b > a, ErrorKind::domain, "window needs 0 < a < b");
  return Bump({{1.0, false, a, b}}, false, "h_window", b / a);
}

Bump Bump::mean_zero(double alpha, double beta) {
  require(alpha > 1.0 && beta > 1.0 && alpha != beta, ErrorKind::domain,
          "mean-zero bump needs two distinct parameters above 1");
  // int profile(log y / log a) dy / y = log a * int profile(t) dt
  const double c = std::log(alpha) / std::log(beta);
  return Bump({{1.0, true, 1.0 / alpha, alpha}, {-c, true, 1.0 / beta, beta}}, true, "psi_mean_zero",
              std::max(alpha, beta));
}

double Bump::operator()(double y) const {
  double s = 0.0;
  for (const auto& p : parts_) s += p.weight * profile(argument(p, y));
  return s;
}

Jet Bump::jet(double y) const {
  Jet total;
  if (y <= 0.0) return total;
  for (const auto& p : parts_) total = total + p.weight * profile_jet(argument_jet(p, y));
  return total;
}

double Bump::derivative(double y, int order) const {
  require(order >= 0 && order <= Jet::kOrder, ErrorKind::domain, "derivative order must lie in [0, 8]");
  if (order == 0) return (*this)(y);
  return jet(y).derivative(order);
}

std::string Bump::descriptor() const {
  std::ostringstream os;
  os << family_ << "(alpha=" << format_number(alpha_) << ")";
  if (parts_.size() > 1 || parts_.front().weight != 1.0) {
    os << "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const auto& p = parts_[i];
      os << (i ? ";" : "") << format_number(p.weight) << (p.log_scale ? "*log" : "*lin") << "("
         << format_number(p.lo) << "," << format_number(p.hi) << ")";
    }
    os << "]";
  }
  return os.str();
}

Bump Bump::scaled(double factor) const {
  Bump b = *this;
  for (auto& p : b.parts_) p.weight *= factor;
  return b;
}

Bump Bump::plus(const Bump& other) const {
  auto parts = parts_;
  parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
  return Bump(std::move(parts), symmetric_ && other.symmetric_, family_ + "+" + other.family_,
              std::max(alpha_, other.alpha_));
}

double Bump::symmetry_defect() const {
  double worst = 0.0;
  const double a = std::log(lo_), b = std::log(hi_);
  for (int i = 0; i <= 100; ++i) {
    const double y = std::exp(a + (b - a) * i / 100.0);
    worst = std::max(worst, std::abs((*this)(y) - (*this)(1.0 / y)));
  }
  return worst;
}

}  // namespace qvar::testfn
