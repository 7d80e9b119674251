#include <cmath>

#include "qvar/error.hpp"
#include "qvar/oscillatory/oscillatory.hpp"

namespace qvar::oscillatory {

namespace {

void partitions(int n, int part, int remaining, std::vector<int>& k, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(k);
    return;
  }
  if (part > n) return;
  for (int count = 0; count * part <= remaining; ++count) {
    k[part - 1] = count;
    partitions(n, part + 1, remaining - count * part, k, out);
  }
  k[part - 1] = 0;
}

}  // namespace

std::vector<std::vector<int>> faa_di_bruno_terms(int n) {
  require(n >= 1, ErrorKind::domain, "derivative order must be positive");
  std::vector<int> k(n, 0);
  std::vector<std::vector<int>> out;
  partitions(n, 1, n, k, out);
  return out;
}

double faa_di_bruno(std::span<const double> p_derivs, std::span<const double> q_derivs, int n) {
  require(static_cast<int>(p_derivs.size()) > n && static_cast<int>(q_derivs.size()) > n, ErrorKind::domain,
          "derivative sequences shorter than the requested order");
  double total = 0.0;
  for (const auto& k : faa_di_bruno_terms(n)) {
    int m = 0;
    double term = std::tgamma(n + 1.0);
    for (int j = 1; j <= n; ++j) {
      const int kj = k[j - 1];
      m += kj;
      term *= std::pow(q_derivs[j] / std::tgamma(j + 1.0), kj) / std::tgamma(kj + 1.0);
    }
    total += term * p_derivs[m];
  }
  return total;
}

}  // namespace qvar::oscillatory
