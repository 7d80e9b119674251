#include <cmath>
#include <json.hpp>
#include <sstream>

#include "qvar/error.hpp"
#include "qvar/format.hpp"
#include "qvar/parallel.hpp"
#include "qvar/variance/variance.hpp"

namespace qvar::variance {

namespace {

void require_symmetric(const Bump& psi) {
  require(psi.symmetry_defect() <= 1e-14, ErrorKind::symmetry, "psi(y) != psi(1/y) for " + psi.descriptor());
}

void require_aligned(const std::vector<mass::MassReport>& r1, const std::vector<mass::MassReport>& r2) {
  require(r1.size() == r2.size(), ErrorKind::domain, "mass report lists differ in length");
  for (std::size_t i = 0; i < r1.size(); ++i)
    require(r1[i].k == r2[i].k && r1[i].form_index == r2[i].form_index, ErrorKind::domain,
            "mass report lists are not aligned");
}

}  // namespace

WindowMasses window_masses(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table) {
  const auto ks = w.weights_in_window();
  trace::require_weights(table, ks);
  std::vector<const forms::Eigenform*> forms;
  for (int k : ks)
    for (const auto& f : table.at(k).forms) forms.push_back(&f);
  const bool same = psi1.descriptor() == psi2.descriptor();
  WindowMasses out;
  out.first = parallel_map<mass::MassReport>(forms.size(), [&](std::size_t i) { return mass::mass_report(*forms[i], psi1); });
  out.second = same ? out.first
                    : parallel_map<mass::MassReport>(forms.size(),
                                                     [&](std::size_t i) { return mass::mass_report(*forms[i], psi2); });
  return out;
}

double variance_empirical(const WindowWeights& w, const std::vector<mass::MassReport>& r1,
                          const std::vector<mass::MassReport>& r2) {
  require_shifted(w);
  require_aligned(r1, r2);
  CompensatedSum total;
  for (std::size_t i = 0; i < r1.size(); ++i)
    total.add(w.weight(r1[i].k) * r1[i].l_sym2 * ((r1[i].mu - r1[i].expected) * (r2[i].mu - r2[i].expected)));
  return total.value();
}

double variance_empirical(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table) {
  require_symmetric(psi1);
  require_symmetric(psi2);
  const WindowMasses m = window_masses(w, psi1, psi2, table);
  return variance_empirical(w, m.first, m.second);
}

Census que_census(const WindowWeights& w, const std::vector<mass::MassReport>& reports, double eps,
                  double threshold) {
  Census c;
  c.threshold = threshold < 0.0 ? std::pow(w.big_k, -0.25 + eps) : threshold;
  for (const auto& r : reports) {
    if (w.weight(r.k) == 0.0) continue;
    ++c.total;
    if (std::abs(r.mu - r.expected) > c.threshold) ++c.exceeders;
  }
  require(c.total > 0, ErrorKind::missing_data, "no mass reports inside the window");
  c.fraction = static_cast<double>(c.exceeders) / static_cast<double>(c.total);
  return c;
}

CauchySchwarz cauchy_schwarz(const WindowWeights& w, const std::vector<mass::MassReport>& r1,
                             const std::vector<mass::MassReport>& r2) {
  require_aligned(r1, r2);
  CompensatedSum ss, e1e1, e2e2, s1s1, s2s2;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double wl = w.weight(r1[i].k) * r1[i].l_sym2;
    ss.add(wl * r1[i].s_direct * r2[i].s_direct);
    e1e1.add(wl * r1[i].e_residual * r1[i].e_residual);
    e2e2.add(wl * r2[i].e_residual * r2[i].e_residual);
    s1s1.add(wl * r1[i].s_direct * r1[i].s_direct);
    s2s2.add(wl * r2[i].s_direct * r2[i].s_direct);
  }
  CauchySchwarz c;
  c.empirical = variance_empirical(w, r1, r2);
  c.shifted_part = ss.value();
  c.gap = std::abs(c.empirical - c.shifted_part);
  const double a1 = std::sqrt(e1e1.value()), a2 = std::sqrt(e2e2.value());
  c.bound = a1 * std::sqrt(s2s2.value()) + a2 * std::sqrt(s1s1.value()) + a1 * a2;
  return c;
}

VarianceReport variance_report(const WindowWeights& w, const Bump& psi1, const Bump& psi2, const WeightTable& table,
                               double census_eps, WindowMasses* masses_out) {
  require_shifted(w);
  require_symmetric(psi1);
  require_symmetric(psi2);
  VarianceReport r;
  r.big_k = w.big_k;
  r.big_g = w.big_g;
  r.theta = std::log(w.big_g) / std::log(w.big_k);
  r.psi1_id = psi1.descriptor();
  r.psi2_id = psi2.descriptor();
  r.window_id = w.window.descriptor();
  r.weights = w.weights_in_window();
  const WindowMasses masses = window_masses(w, psi1, psi2, table);
  r.lhs_empirical = variance_empirical(w, masses.first, masses.second);
  r.cs = cauchy_schwarz(w, masses.first, masses.second);
  r.census = que_census(w, masses.first, census_eps);
  r.mellin = mellin_data(psi1, psi2);
  r.diag_numeric = diagonal_numeric(w, psi1, psi2);
  r.diag_asymptotic = diagonal_asymptotic(w, r.mellin);
  r.main_term = variance_main_term(w, r.mellin);
  if (w.big_k <= kOdMaxK) r.od = od_probe(w, psi1, psi2, ExponentConfig::defaults());
  r.ratios["lhs_over_main_term"] = r.lhs_empirical / r.main_term.value;
  r.ratios["lhs_over_diag_numeric"] = r.lhs_empirical / r.diag_numeric.value;
  r.ratios["diag_numeric_over_asymptotic"] = r.diag_numeric.value / r.diag_asymptotic.value;
  r.ratios["diag_only_over_asymptotic"] = r.diag_numeric.diagonal_only / r.diag_asymptotic.value;
  r.ratios["main_term_over_K_11_8"] = r.main_term.value / std::pow(w.big_k, 11.0 / 8.0);
  r.ratios["census_fraction"] = r.census.fraction;
  if (masses_out) *masses_out = masses;
  return r;
}

std::string to_json(const VarianceReport& r) {
  using nlohmann::ordered_json;
  auto num = [](double v) { return v; };
  ordered_json j;
  j["K"] = num(r.big_k);
  j["G"] = num(r.big_g);
  j["theta"] = num(r.theta);
  j["psi1"] = r.psi1_id;
  j["psi2"] = r.psi2_id;
  j["window"] = r.window_id;
  j["weights"] = r.weights;
  j["lhs_empirical"] = num(r.lhs_empirical);
  j["diag_numeric"] = {{"value", num(r.diag_numeric.value)},
                       {"diagonal_only", num(r.diag_numeric.diagonal_only)},
                       {"mirror", num(r.diag_numeric.mirror)},
                       {"sporadic", num(r.diag_numeric.sporadic)},
                       {"pairs", r.diag_numeric.pairs}};
  ordered_json terms = ordered_json::array();
  for (double t : r.diag_asymptotic.terms) terms.push_back(num(t));
  j["diag_asymptotic"] = {{"value", num(r.diag_asymptotic.value)},
                          {"terms", terms},
                          {"error_K2_over_G", num(r.diag_asymptotic.error_k2_over_g)},
                          {"error_G2_over_rootK", num(r.diag_asymptotic.error_g2_over_rk)}};
  ordered_json mterms = ordered_json::array();
  for (double t : r.main_term.terms) mterms.push_back(num(t));
  j["main_term"] = {{"value", num(r.main_term.value)}, {"terms", mterms}, {"error_K_11_8", num(std::pow(r.big_k, 11.0 / 8.0))}};
  j["mellin"] = {{"psi1_at_0", num(r.mellin.psi1_at_0)},
                 {"psi2_at_0", num(r.mellin.psi2_at_0)},
                 {"psi2_slope_at_0", num(r.mellin.psi2_slope_at_0)},
                 {"line_integral", num(r.mellin.line_integral)},
                 {"line_height", num(r.mellin.line_height)}};
  j["cauchy_schwarz"] = {{"empirical", num(r.cs.empirical)},
                         {"shifted_part", num(r.cs.shifted_part)},
                         {"gap", num(r.cs.gap)},
                         {"bound", num(r.cs.bound)}};
  j["census"] = {{"total", r.census.total},
                 {"exceeders", r.census.exceeders},
                 {"threshold", num(r.census.threshold)},
                 {"fraction", num(r.census.fraction)}};
  if (r.od) {
    j["od_probe"] = {{"od", num(r.od->od)},
                     {"normalized_K_11_8", num(r.od->normalized)},
                     {"terms", r.od->terms},
                     {"c_max", r.od->c_max},
                     {"d_max", r.od->d_max},
                     {"m_min", r.od->m_min},
                     {"m_max", r.od->m_max},
                     {"max_stationary_residual", num(r.od->max_stationary_residual)}};
  } else {
    j["od_probe"] = nullptr;
  }
  ordered_json ratios;
  for (const auto& [k, v] : r.ratios) ratios[k] = num(v);
  j["ratios"] = ratios;
  return j.dump(2) + "\n";
}

std::string ratio_csv(const VarianceReport& r) {
  std::ostringstream os;
  os << "name,value\n";
  for (const auto& [k, v] : r.ratios) os << k << ',' << format_sci(v) << '\n';
  return os.str();
}

}  // namespace qvar::variance
