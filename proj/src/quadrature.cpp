#include "qvar/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "qvar/error.hpp"

namespace qvar::quad {

namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  // Boost stores the non-negative half; mirror it into a full ascending set.
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0.0) continue;
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int order) {
  static const Rule r10 = make_rule<10>();
  static const Rule r20 = make_rule<20>();
  static const Rule r30 = make_rule<30>();
  static const Rule r40 = make_rule<40>();
  static const Rule r60 = make_rule<60>();
  switch (order) {
    case 10: return r10;
    case 20: return r20;
    case 30: return r30;
    case 40: return r40;
    case 60: return r60;
    default: raise(ErrorKind::domain, "unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

NodeSet composite(double a, double b, int panels, int order) {
  const Rule& r = gauss_legendre(order);
  NodeSet out;
  out.x.reserve(static_cast<std::size_t>(panels) * r.x.size());
  out.w.reserve(out.x.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      out.x.push_back(mid + 0.5 * h * r.x[i]);
      out.w.push_back(0.5 * h * r.w[i]);
    }
  }
  return out;
}

}  // namespace qvar::quad
