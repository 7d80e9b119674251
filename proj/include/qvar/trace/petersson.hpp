#pragma once

#include <map>
#include <vector>

#include "qvar/forms/eigenform.hpp"
#include "qvar/testfn/bump.hpp"

namespace qvar::trace {

/// Short-interval weight over even k. Plain mode: h((k-1)/K). Shifted mode:
/// g((k-1)/G) with g(x) = h(x - K/G), i.e. h((k-1-K)/G).
struct WindowWeights {
  double big_k = 0.0;
  double big_g = 0.0;
  testfn::Bump window;
  bool shifted = false;

  void validate() const;
  /// Scale of the averaged formula: K in plain mode, G in shifted mode.
  double scale() const { return shifted ? big_g : big_k; }
  /// The function whose argument is (k-1)/scale(): h, or g in shifted mode.
  testfn::Bump effective_window() const;
  double weight(int k) const;
  /// Even k with nonzero weight, ascending.
  std::vector<int> weights_in_window() const;
};

/// Plain window with G = K^theta.
WindowWeights make_window(double big_k, double theta, const testfn::Bump& h, bool shifted);

using WeightTable = std::map<int, forms::WeightData>;

/// Throws missing_data naming every absent weight.
void require_weights(const WeightTable& table, const std::vector<int>& weights);

/// 2 pi^2 / ((k-1) L(1, sym^2 f)).
double harmonic_weight(const forms::Eigenform& f);

struct ExactPetersson {
  double lhs = 0.0;
  double rhs = 0.0;
  int c_max = 0;
  double tail_bound = 0.0;
};

/// Classical Petersson formula for one weight, c-sum cut where the Bessel
/// tail bound drops below tail_tol.
ExactPetersson exact_petersson_check(const forms::WeightData& data, int m, int n, double tail_tol = 1e-10);

double averaged_petersson_lhs(int m, int n, const WindowWeights& w, const WeightTable& table);

struct AveragedRhs {
  double main = 0.0;
  double kloosterman_term = 0.0;
  double error_budget = 0.0;
  int c_max = 0;
};

AveragedRhs averaged_petersson_rhs(int m, int n, const WindowWeights& w);

}  // namespace qvar::trace
