#pragma once

#include <span>
#include <vector>

#include "qvar/forms/qexpansion.hpp"

namespace qvar::forms {

struct Eigenform {
  int weight = 0;
  int conjugacy_id = 0;        // rank by lambda(2), ascending
  std::vector<double> lambda;  // lambda[n] for 1 <= n <= N; lambda[0] = 0
  std::vector<double> coords;  // coordinates in the echelon basis, coords[0] = 1
  double l_sym2 = 0.0;
  double a1_sq = 0.0;
  double log_a1_sq = 0.0;

  int truncation() const { return static_cast<int>(lambda.size()) - 1; }
  double lambda_at(int n) const;
};

/// All normalized eigenforms of weight k, with data up to n = truncation.
struct WeightData {
  int weight = 0;
  int truncation = 0;
  std::vector<Eigenform> forms;
};

int default_truncation(int k);

/// Builds the eigenforms of weight k; L(1, sym^2 f) and |a_f(1)|^2 are filled in.
WeightData eigenforms(int k, int truncation);

/// Same, starting from an already computed basis.
WeightData eigenforms_from_basis(int k, const std::vector<QExpansion>& basis);

/// lambda(n^2) for 1 <= n <= n_max from lambda(p), p prime, via the Hecke recursion.
std::vector<double> lambda_of_squares(std::span<const double> lambda, int n_max);

/// Approximate functional equation for L(1, sym^2 f); `split` moves the
/// balance point between the two sums and must not change the value.
struct LSym2Detail {
  double value = 0.0;
  int terms = 0;
};
LSym2Detail l_sym2_at_1(std::span<const double> lambda, int k, double split = 1.0);
double l_sym2_at_1(const Eigenform& f);

/// <F, F> over the standard fundamental domain for F = scale * sum_n c_n q^n,
/// where c_n = sign_n * exp(log_abs_n). Entries with log_abs = -inf are zero.
struct PeterssonOptions {
  double y_cutoff = 0.0;  // 0 picks the cutoff from the tail bound
  bool reflect_x = false;
  int x_panels = 8;
  int y_panels_cap = 4;
};
double petersson_norm_log_coeffs(std::span<const double> log_abs, std::span<const int> sign, int k,
                                 const PeterssonOptions& opt = {});

/// Norm of the exact integer expansion.
double petersson_norm(const QExpansion& f, const PeterssonOptions& opt = {});

/// Norm of sum_n lambda(n) (4 pi n)^{(k-1)/2} q^n, i.e. 1 / |a_f(1)|^2.
double petersson_norm(const Eigenform& f, const PeterssonOptions& opt = {});

}  // namespace qvar::forms
