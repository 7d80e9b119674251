#include "qvar/forms/qexpansion.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "qvar/error.hpp"

namespace qvar::forms {

namespace {

using Coeffs = std::vector<mpz_class>;

int valuation(const Coeffs& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0) return static_cast<int>(i);
  return static_cast<int>(a.size());
}

Coeffs mul_trunc(const Coeffs& a, const Coeffs& b, int n_max) {
  Coeffs c(static_cast<std::size_t>(n_max) + 1);
  const int va = valuation(a);
  const int vb = valuation(b);
  const int a_top = std::min<int>(n_max, static_cast<int>(a.size()) - 1);
  const int b_top = static_cast<int>(b.size()) - 1;
  for (int n = va + vb; n <= n_max; ++n) {
    mpz_ptr out = c[n].get_mpz_t();
    const int lo = std::max(va, n - b_top);
    const int hi = std::min(a_top, n - vb);
    for (int i = lo; i <= hi; ++i) {
      if (sgn(a[i]) == 0) continue;
      mpz_addmul(out, a[i].get_mpz_t(), b[n - i].get_mpz_t());
    }
  }
  return c;
}

Coeffs divisor_power_series(int power, long scale, long constant, int n_max) {
  Coeffs c(static_cast<std::size_t>(n_max) + 1);
  for (int d = 1; d <= n_max; ++d) {
    mpz_class dp;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(power));
    for (int m = d; m <= n_max; m += d) c[m] += dp;
  }
  for (int n = 1; n <= n_max; ++n) c[n] *= scale;
  c[0] = constant;
  return c;
}

// Shared powers of E4, E6 and Delta, keyed by (series, exponent, truncation).
class PowerCache {
 public:
  std::shared_ptr<const Coeffs> get(char series, int exponent, int n_max) {
    {
      std::lock_guard lock(mutex_);
      auto it = table_.find({series, exponent, n_max});
      if (it != table_.end()) return it->second;
    }
    std::shared_ptr<const Coeffs> value;
    if (exponent == 0) {
      Coeffs one(static_cast<std::size_t>(n_max) + 1);
      one[0] = 1;
      value = std::make_shared<const Coeffs>(std::move(one));
    } else if (exponent == 1) {
      value = std::make_shared<const Coeffs>(base(series, n_max));
    } else {
      auto prev = get(series, exponent - 1, n_max);
      auto one = get(series, 1, n_max);
      value = std::make_shared<const Coeffs>(mul_trunc(*prev, *one, n_max));
    }
    std::lock_guard lock(mutex_);
    return table_.emplace(std::tuple{series, exponent, n_max}, value).first->second;
  }

 private:
  static Coeffs base(char series, int n_max) {
    switch (series) {
      case '4': return divisor_power_series(3, 240, 1, n_max);
      case '6': return divisor_power_series(5, -504, 1, n_max);
      default: {
        // 1728 Delta = E4^3 - E6^2
        Coeffs e4 = divisor_power_series(3, 240, 1, n_max);
        Coeffs e6 = divisor_power_series(5, -504, 1, n_max);
        Coeffs e4sq = mul_trunc(e4, e4, n_max);
        Coeffs a = mul_trunc(e4sq, e4, n_max);
        Coeffs b = mul_trunc(e6, e6, n_max);
        for (int n = 0; n <= n_max; ++n) {
          a[n] -= b[n];
          mpz_divexact_ui(a[n].get_mpz_t(), a[n].get_mpz_t(), 1728);
        }
        return a;
      }
    }
  }

  std::mutex mutex_;
  std::map<std::tuple<char, int, int>, std::shared_ptr<const Coeffs>> table_;
};

PowerCache& power_cache() {
  static PowerCache cache;
  return cache;
}

QExpansion wrap(int weight, int n_max, Coeffs c) {
  QExpansion q;
  q.weight = weight;
  q.truncation = n_max;
  q.coeffs = std::move(c);
  return q;
}

}  // namespace

int cusp_dimension(int k) {
  if (k < 12 || k % 2 != 0) return 0;
  return k / 12 - (k % 12 == 2 ? 1 : 0);
}

QExpansion eisenstein_e4(int n) { return wrap(4, n, *power_cache().get('4', 1, n)); }
QExpansion eisenstein_e6(int n) { return wrap(6, n, *power_cache().get('6', 1, n)); }
QExpansion delta(int n) { return wrap(12, n, *power_cache().get('D', 1, n)); }

QExpansion multiply(const QExpansion& a, const QExpansion& b, int truncation) {
  const int n_max = std::min({truncation, a.truncation, b.truncation});
  return wrap(a.weight + b.weight, n_max, mul_trunc(a.coeffs, b.coeffs, n_max));
}

std::vector<QExpansion> victor_miller_basis(int k, int truncation) {
  require(k % 2 == 0, ErrorKind::domain, "weight must be even");
  const int dim = cusp_dimension(k);
  if (dim == 0) return {};
  require(truncation >= dim, ErrorKind::domain, "truncation below dim S_k");
  auto& cache = power_cache();
  std::vector<Coeffs> g(static_cast<std::size_t>(dim) + 1);
  for (int i = 1; i <= dim; ++i) {
    const int w = k - 12 * i;
    const int b = (w % 4 == 2) ? 1 : 0;
    const int a = (w - 6 * b) / 4;
    auto d = cache.get('D', i, truncation);
    auto e4 = cache.get('4', a, truncation);
    Coeffs eis = b ? mul_trunc(*e4, *cache.get('6', 1, truncation), truncation) : *e4;
    g[i] = mul_trunc(*d, eis, truncation);
  }
  // Each g_i = q^i + O(q^{i+1}); clear the entries above the diagonal
  // from the bottom row upwards.
  for (int i = dim - 1; i >= 1; --i) {
    for (int j = i + 1; j <= dim; ++j) {
      const mpz_class f = g[i][j];
      if (sgn(f) == 0) continue;
      for (int n = j; n <= truncation; ++n) g[i][n] -= f * g[j][n];
    }
  }
  std::vector<QExpansion> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (int i = 1; i <= dim; ++i) out.push_back(wrap(k, truncation, std::move(g[i])));
  return out;
}

std::vector<mpz_class> hecke_apply(const QExpansion& f, int n, int m_max) {
  require(n >= 1, ErrorKind::domain, "Hecke index must be positive");
  require(static_cast<long>(m_max) * n <= f.truncation, ErrorKind::truncation,
          "expansion too short for T_" + std::to_string(n) + " up to m = " + std::to_string(m_max));
  std::vector<mpz_class> out(static_cast<std::size_t>(m_max) + 1);
  const unsigned long kk = static_cast<unsigned long>(f.weight - 1);
  for (int m = 0; m <= m_max; ++m) {
    const int g = m == 0 ? n : std::gcd(m, n);
    for (int d = 1; d <= g; ++d) {
      if (g % d != 0) continue;
      const long idx = static_cast<long>(m) * n / (static_cast<long>(d) * d);
      if (sgn(f[static_cast<int>(idx)]) == 0) continue;
      mpz_class dp;
      mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), kk);
      out[m] += dp * f[static_cast<int>(idx)];
    }
  }
  return out;
}

RationalMatrix hecke_matrix(const std::vector<QExpansion>& basis, int n) {
  const int dim = static_cast<int>(basis.size());
  RationalMatrix m(dim, std::vector<mpq_class>(dim));
  for (int i = 0; i < dim; ++i) {
    require(basis[i].truncation >= n * dim + n, ErrorKind::truncation,
            "basis truncation " + std::to_string(basis[i].truncation) + " too short for T_" +
                std::to_string(n));
    const auto t = hecke_apply(basis[i], n, dim);
    for (int j = 0; j < dim; ++j) m[i][j] = t[j + 1];
  }
  return m;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  RationalMatrix c(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

std::vector<mpq_class> characteristic_polynomial(const RationalMatrix& a) {
  // Faddeev-LeVerrier.
  const std::size_t d = a.size();
  std::vector<mpq_class> c(d + 1);
  c[d] = 1;
  RationalMatrix mk(d, std::vector<mpq_class>(d));
  for (std::size_t k = 1; k <= d; ++k) {
    RationalMatrix next = multiply(a, mk);
    for (std::size_t i = 0; i < d; ++i) next[i][i] += c[d - k + 1];
    mk = std::move(next);
    const RationalMatrix am = multiply(a, mk);
    mpq_class tr = 0;
    for (std::size_t i = 0; i < d; ++i) tr += am[i][i];
    c[d - k] = -tr / static_cast<long>(k);
  }
  return c;
}

}  // namespace qvar::forms
