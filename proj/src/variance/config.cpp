#include <cmath>

#include "qvar/error.hpp"
#include "qvar/variance/variance.hpp"

namespace qvar::variance {

bool ExponentConfig::constraints_hold() const {
  return delta > 0.5 * (1.0 - theta + eps) && theta > 2.0 / 3.0 + 4.0 * eta / 3.0 + eps && theta + eta - delta > 1.0;
}

void ExponentConfig::validate() const {
  require(theta > 0.0 && theta < 1.0, ErrorKind::domain, "theta must lie in (0, 1)");
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  require(delta > 0.5 * (1.0 - theta + eps), ErrorKind::domain, "exponents violate delta > (1 - theta + eps)/2");
  require(theta > 2.0 / 3.0 + 4.0 * eta / 3.0 + eps, ErrorKind::domain,
          "exponents violate theta > 2/3 + 4 eta/3 + eps");
  require(theta + eta - delta > 1.0, ErrorKind::domain, "exponents violate theta + eta - delta > 1");
}

ExponentConfig ExponentConfig::defaults() {
  ExponentConfig c;
  c.validate();
  return c;
}

void require_shifted(const WindowWeights& w) {
  w.validate();
  require(w.shifted, ErrorKind::domain, "variance windows weight k by h((k-1-K)/G)");
}

}  // namespace qvar::variance
