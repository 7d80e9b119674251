#include "qvar/cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "qvar/error.hpp"
#include "qvar/format.hpp"
#include "qvar/forms/cache.hpp"
#include "qvar/mass/report.hpp"
#include "qvar/parallel.hpp"

namespace fs = std::filesystem;

namespace qvar::cli {

namespace {

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream f(file, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::io, "cannot write " + file.string());
  f << text;
  require(static_cast<bool>(f), ErrorKind::io, "write failed: " + file.string());
}

fs::path output_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  return cfg.out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<mass::MassReport> mass_rows(const trace::WeightTable& table, const std::vector<int>& weights,
                                        const testfn::Bump& psi) {
  std::vector<const forms::Eigenform*> forms;
  for (int k : weights)
    for (const auto& f : table.at(k).forms) forms.push_back(&f);
  return parallel_map<mass::MassReport>(forms.size(), [&](std::size_t i) { return mass::mass_report(*forms[i], psi); });
}

}  // namespace

trace::WeightTable load_table(const RunConfig& cfg, const std::vector<int>& weights, bool build_missing) {
  trace::WeightTable table;
  std::vector<int> missing;
  for (int k : weights) {
    const int n = cfg.truncation_for(k);
    if (build_missing) {
      fs::create_directories(cfg.cache_dir);
      table[k] = forms::load_or_build(k, n, cfg.cache_dir).data;
    } else if (auto d = forms::read_cache(forms::cache_path(cfg.cache_dir, k, n), k, n)) {
      table[k] = std::move(*d);
    } else {
      missing.push_back(k);
    }
  }
  require(missing.empty(), ErrorKind::missing_data,
          "no valid eigen-data in '" + cfg.cache_dir + "' for weights " + join(missing) +
              "; build them with: qvar eigenforms --weights " + join(missing));
  return table;
}

int cmd_eigenforms(const RunConfig& cfg, std::ostream& out) {
  const std::vector<int> weights = cfg.weight_list();
  if (weights.empty()) return kExitOk;
  fs::create_directories(cfg.cache_dir);
  for (int k : weights) {
    const auto r = forms::load_or_build(k, cfg.truncation_for(k), cfg.cache_dir);
    out << "k=" << k << " forms=" << r.data.forms.size() << " truncation=" << r.data.truncation << ' '
        << (r.cached ? "cached" : "built") << '\n';
    for (const auto& f : r.data.forms)
      out << "k=" << k << " form=" << f.conjugacy_id << " lambda2=" << format_sci(f.lambda_at(2))
          << " l_sym2=" << format_sci(f.l_sym2) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_suite(cfg.suite, cfg);
  bool ok = true;
  std::string csv = "suite,check,residual,tolerance,status\n";
  for (const auto& r : results) {
    const char* status = r.passed ? "PASS" : "FAIL";
    out << "suite=" << cfg.suite << " check=\"" << r.name << "\" residual=" << format_sci(r.residual)
        << " tolerance=" << format_sci(r.tolerance) << " status=" << status << '\n';
    csv += cfg.suite + ",\"" + r.name + "\"," + format_sci(r.residual) + "," + format_sci(r.tolerance) + "," +
           status + "\n";
    ok = ok && r.passed;
  }
  write_file(output_dir(cfg) / ("verify_" + cfg.suite + ".csv"), csv);
  out << "suite=" << cfg.suite << " checks=" << results.size() << " result=" << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_mass(const RunConfig& cfg, std::ostream& out) {
  std::vector<int> weights = cfg.weight_list();
  if (weights.empty()) weights = cfg.variance_window().weights_in_window();
  const auto table = load_table(cfg, weights, false);
  const auto rows = mass_rows(table, weights, cfg.psi());
  std::ostringstream csv;
  mass::write_csv(csv, rows);
  const fs::path file = output_dir(cfg) / "mass.csv";
  write_file(file, csv.str());
  out << "mass rows=" << rows.size() << " file=" << file.string() << '\n';
  return kExitOk;
}

int cmd_variance(const RunConfig& cfg, std::ostream& out) {
  const auto w = cfg.variance_window();
  const auto table = load_table(cfg, w.weights_in_window(), false);
  const testfn::Bump psi = cfg.psi();
  variance::WindowMasses masses;
  const auto report = variance::variance_report(w, psi, psi, table, cfg.census_eps, &masses);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "variance_report.json", variance::to_json(report));
  write_file(dir / "variance_ratios.csv", variance::ratio_csv(report));
  std::ostringstream csv;
  mass::write_csv(csv, masses.first);
  write_file(dir / "variance_mass.csv", csv.str());
  out << "K=" << format_sci(report.big_k) << " G=" << format_sci(report.big_g) << " weights=" << join(report.weights)
      << '\n';
  out << "lhs_empirical=" << format_sci(report.lhs_empirical) << '\n';
  for (std::size_t i = 0; i < report.diag_asymptotic.terms.size(); ++i)
    out << "diagonal_term_" << i + 1 << '=' << format_sci(report.diag_asymptotic.terms[i]) << '\n';
  out << "diagonal_asymptotic=" << format_sci(report.diag_asymptotic.value)
      << " diagonal_numeric=" << format_sci(report.diag_numeric.value) << '\n';
  out << "main_term=" << format_sci(report.main_term.value) << '\n';
  for (const auto& [name, value] : report.ratios) out << "ratio " << name << '=' << format_sci(value) << '\n';
  return kExitOk;
}

int cmd_census(const RunConfig& cfg, std::ostream& out) {
  const auto w = cfg.variance_window();
  const auto weights = w.weights_in_window();
  const auto table = load_table(cfg, weights, false);
  const testfn::Bump psi = cfg.psi();
  const auto rows = mass_rows(table, weights, psi);
  const auto census = variance::que_census(w, rows, cfg.census_eps);
  std::string csv = "k,form,mu_minus_expected,exceeds\n";
  for (const auto& r : rows) {
    const double gap = r.mu - r.expected;
    csv += std::to_string(r.k) + "," + std::to_string(r.form_index) + "," + format_sci(gap) + "," +
           (std::abs(gap) > census.threshold ? "1" : "0") + "\n";
  }
  write_file(output_dir(cfg) / "census.csv", csv);
  out << "census total=" << census.total << " exceeders=" << census.exceeders
      << " threshold=" << format_sci(census.threshold) << " fraction=" << format_sci(census.fraction) << '\n';
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on the variance of holomorphic mass equidistribution", "qvar"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  app.set_config("--config", "", "Flat key=value file; command-line flags override it");
  app.add_option("--K", cfg.big_k, "Window centre K");
  app.add_option("--G", cfg.big_g, "Window length G (default K^theta)");
  app.add_option("--theta", cfg.theta, "Exponent with G = K^theta");
  app.add_option("--alpha", cfg.alpha, "Test-function support parameter");
  app.add_option("--bump", cfg.bump_family, "Test-function family: canonical or mean-zero");
  app.add_option("--beta", cfg.beta, "Second support parameter of the mean-zero family");
  app.add_option("--weights", cfg.weights, "Weights, e.g. 12-60, 12-60:4 or 12,16,20");
  app.add_option("--truncation", cfg.truncation, "Fourier truncation N (default per weight)");
  app.add_option("--cache-dir", cfg.cache_dir, "Eigen-data cache directory");
  app.add_option("--out", cfg.out, "Output directory for reports");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_option("--tolerance-scale", cfg.tolerance_scale, "Multiplier applied to every check tolerance");
  app.add_option("--eps", cfg.census_eps, "Exponent slack in the census threshold K^(-1/4+eps)");
  app.add_option("--sigma", cfg.contour_sigma, "Abscissa of the Mellin inversion contour");

  auto* eig = app.add_subcommand("eigenforms", "Build or verify the eigen-data cache");
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("suite", cfg.suite, "kloosterman | petersson | mellin | shifted | stationary")->required();
  auto* mas = app.add_subcommand("mass", "Mass table for the chosen weights");
  auto* var = app.add_subcommand("variance", "Variance pipeline on the window h((k-1-K)/G)");
  auto* cen = app.add_subcommand("census", "Count forms far from equidistribution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ver->parsed() && std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end())
      raise(ErrorKind::usage, "unknown suite '" + cfg.suite + "'");
    cfg.validate();
    set_thread_count(cfg.threads);
    if (eig->parsed()) return cmd_eigenforms(cfg, out);
    if (ver->parsed()) return cmd_verify(cfg, out);
    if (mas->parsed()) return cmd_mass(cfg, out);
    if (var->parsed()) return cmd_variance(cfg, out);
    if (cen->parsed()) return cmd_census(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::usage ? kExitUsage : kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace qvar::cli
