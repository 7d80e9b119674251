#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvar/mass/mass.hpp"
#include "qvar/testfn/bump.hpp"
#include "qvar/trace/petersson.hpp"

namespace qvar::variance {

using trace::WeightTable;
using trace::WindowWeights;
using testfn::Bump;

/// Exponents of the off-diagonal analysis. Constraints:
///   delta > (1 - theta + eps)/2,  theta > 2/3 + 4 eta/3 + eps,  theta + eta - delta > 1.
struct ExponentConfig {
  double theta = 0.9;
  double delta = 9.0 / 160.0;
  double eta = 13.0 / 80.0;
  double eps = 0.01;

  bool constraints_hold() const;
  void validate() const;
  /// Defaults, validated.
  static ExponentConfig defaults();
};

/// The variance formulas use the shifted window h((k-1-K)/G).
void require_shifted(const WindowWeights& w);

/// Windowed sum of L(1, sym^2 f) (mu1 - E1)(mu2 - E2) with weights h((k-1-K)/G).
struct WindowMasses {
  std::vector<mass::MassReport> first;
  std::vector<mass::MassReport> second;
};
WindowMasses window_masses(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table);

double variance_empirical(const WindowWeights& w, const std::vector<mass::MassReport>& r1,
                          const std::vector<mass::MassReport>& r2);
double variance_empirical(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table);

/// Diagonal term of the variance, enumerating every solution of
/// n1(n1+m1) = n2(n2+m2) inside the supports. Each N = ab with a != b
/// contributes its ordered pairs (a, b) and (b, a) (m of either sign).
struct DiagonalOptions {
  double gauss_cut = 40.0;  // drop pairs with X m^2 / (2 (2n+m)^2) above this
  int t_panels = 8;
};
struct DiagonalNumeric {
  double value = 0.0;
  double diagonal_only = 0.0;  // n1 = n2, m1 = m2
  double mirror = 0.0;         // (n, m) against (n + m, -m)
  double sporadic = 0.0;       // all other solutions
  long pairs = 0;
};
DiagonalNumeric diagonal_numeric(const WindowWeights& w, const Bump& psi1, const Bump& psi2,
                                 const DiagonalOptions& opt = {});

/// Mellin data shared by the asymptotic formulas.
struct MellinData {
  double psi1_at_0 = 0.0;
  double psi2_at_0 = 0.0;
  double psi2_slope_at_0 = 0.0;
  double line_integral = 0.0;  // (1/2 pi i) int_(1) psi1~(-s) psi2~(s) zeta(1-s) zeta(1+s) ds
  double line_height = 0.0;
};
MellinData mellin_data(const Bump& psi1, const Bump& psi2, double height = 0.0);

/// The same line integral on |Im s| <= height.
double zeta_line_integral(const Bump& psi1, const Bump& psi2, double height);

struct DiagonalAsymptotic {
  std::array<double, 4> terms{};
  double value = 0.0;
  double error_k2_over_g = 0.0;   // K^{2+eps} / G
  double error_g2_over_rk = 0.0;  // K^{-1/2+eps} G^2
};
/// With corrections off, the (1 + sqrt(u) G/K) factors are replaced by 1.
DiagonalAsymptotic diagonal_asymptotic(const WindowWeights& w, const MellinData& md, bool corrections = true,
                                       double eps = 0.01);
DiagonalAsymptotic diagonal_asymptotic(const WindowWeights& w, const Bump& psi1, const Bump& psi2,
                                       bool corrections = true);

struct MainTerm {
  std::array<double, 3> terms{};
  double value = 0.0;
};
MainTerm variance_main_term(const WindowWeights& w, const MellinData& md);
MainTerm variance_main_term(const WindowWeights& w, const Bump& psi1, const Bump& psi2);

/// f(n1, n2, m1, m2) = 2 sqrt(n1(n1+m1) n2(n2+m2)) - 2 n1 n2 - n1 m2 - n2 m1.
double od_phase(double n1, double n2, double m1, double m2);
/// d/dx of f(x, n2, m1, m2) - v x in the closed form.
double od_phase_slope(double x, double n2, double m1, double m2, double v = 0.0);
/// Stationary point for shift v; v = 0 gives m1 n2 / m2.
double od_stationary_point(double v, double n2, double m1, double m2);

struct OdProbe {
  double od = 0.0;
  double normalized = 0.0;  // |OD| K^{-11/8}
  long terms = 0;
  int c_max = 0;
  int d_max = 0;
  int m_min = 0;
  int m_max = 0;
  double max_stationary_residual = 0.0;
};
inline constexpr double kOdMaxK = 500.0;
OdProbe od_probe(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const ExponentConfig& cfg);

struct Census {
  long total = 0;
  long exceeders = 0;
  double threshold = 0.0;
  double fraction = 0.0;
};
/// Counts forms with |mu - E| > threshold; threshold < 0 means K^{-1/4 + eps}.
Census que_census(const WindowWeights& w, const std::vector<mass::MassReport>& reports, double eps,
                  double threshold = -1.0);

/// Cauchy-Schwarz assembly from mu - E = S + E_res.
struct CauchySchwarz {
  double empirical = 0.0;
  double shifted_part = 0.0;  // sum w L S1 S2
  double gap = 0.0;           // |empirical - shifted_part|
  double bound = 0.0;
};
CauchySchwarz cauchy_schwarz(const WindowWeights& w, const std::vector<mass::MassReport>& r1,
                             const std::vector<mass::MassReport>& r2);

struct VarianceReport {
  double big_k = 0.0;
  double big_g = 0.0;
  double theta = 0.0;
  std::string psi1_id, psi2_id, window_id;
  std::vector<int> weights;
  double lhs_empirical = 0.0;
  DiagonalNumeric diag_numeric;
  DiagonalAsymptotic diag_asymptotic;
  MainTerm main_term;
  MellinData mellin;
  CauchySchwarz cs;
  Census census;
  std::optional<OdProbe> od;  // only within the od_probe cost guard
  std::map<std::string, double> ratios;
};

/// Runs the whole pipeline on one window; masses_out receives the per-form reports.
VarianceReport variance_report(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table,
                               double census_eps = 0.05, WindowMasses* masses_out = nullptr);

/// JSON text; field order and number formatting are fixed.
std::string to_json(const VarianceReport& r);
/// name,value rows of the ratio table.
std::string ratio_csv(const VarianceReport& r);

}  // namespace qvar::variance
