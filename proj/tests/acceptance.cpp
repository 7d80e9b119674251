// One line per acceptance criterion; exit status 1 when any criterion fails.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <gmpxx.h>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <unistd.h>

#include "qvar/cli/commands.hpp"
#include "qvar/expsums/arithmetic.hpp"
#include "qvar/expsums/kloosterman.hpp"
#include "qvar/forms/cache.hpp"
#include "qvar/forms/qexpansion.hpp"
#include "qvar/format.hpp"
#include "qvar/mass/mass.hpp"
#include "qvar/mass/report.hpp"
#include "qvar/oscillatory/oscillatory.hpp"
#include "qvar/testfn/transforms.hpp"
#include "qvar/trace/petersson.hpp"
#include "qvar/variance/variance.hpp"

using namespace qvar;
namespace fs = std::filesystem;
using testfn::Bump;
using testfn::BumpKind;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_cache;

const forms::WeightData& weight_data(int k) {
  static std::map<int, forms::WeightData> loaded;
  auto it = loaded.find(k);
  if (it == loaded.end())
    it = loaded.emplace(k, forms::load_or_build(k, forms::default_truncation(k), g_cache).data).first;
  return it->second;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// ---------------------------------------------------------------- 1
Outcome kloosterman_identity() {
  double worst = 0.0;
  for (int c = 1; c <= 12; ++c) {
    const double rhs = std::pow(c, 3) * static_cast<double>(expsums::euler_phi(c));
    worst = std::max(worst, std::abs(expsums::kloosterman_identity_lhs(c) - rhs) / rhs);
  }
  return {worst < 1e-6, "c=1..12 max relative error " + sci(worst) + " (tol 1e-6)"};
}

// ---------------------------------------------------------------- 2
std::vector<mpz_class> delta_product(int n_max) {
  std::vector<mpz_class> c(static_cast<std::size_t>(n_max) + 1, 0);
  c[1] = 1;
  for (int n = 1; n < n_max; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int i = n_max; i >= n; --i) c[i] -= c[i - n];
  return c;
}

Outcome eigenform_suite() {
  constexpr int kMax = 1000;
  double recursion = 0.0, multiplicative = 0.0, deligne = 0.0;
  std::vector<int> primes;
  for (int p = 2; p <= kMax; ++p)
    if (expsums::factorize(p).size() == 1 && expsums::factorize(p)[0].second == 1) primes.push_back(p);
  for (int k = 12; k <= 60; k += 2) {
    for (const auto& f : weight_data(k).forms) {
      auto lam = [&](long n) { return f.lambda_at(static_cast<int>(n)); };
      for (int p : primes)
        for (long q = p; q * p <= kMax; q *= p)
          recursion = std::max(recursion, std::abs(lam(p) * lam(q) - lam(q * p) - lam(q / p)));
      for (long m = 2; m <= kMax; ++m)
        for (long n = m + 1; m * n <= kMax; ++n)
          if (std::gcd(m, n) == 1) multiplicative = std::max(multiplicative, std::abs(lam(m * n) - lam(m) * lam(n)));
      for (long n = 1; n <= kMax; ++n)
        deligne = std::max(deligne, std::abs(lam(n)) - static_cast<double>(expsums::divisor_count(n)));
    }
  }
  const auto basis = forms::victor_miller_basis(12, 10);
  const auto ref = delta_product(10);
  bool tau = true;
  for (int n = 1; n <= 10; ++n) tau = tau && basis[0][n] == ref[static_cast<std::size_t>(n)];
  const bool pass = recursion < 1e-10 && multiplicative < 1e-10 && deligne < 1e-10 && tau;
  return {pass, "k=12..60 n<=1000: recursion " + sci(recursion) + ", multiplicativity " + sci(multiplicative) +
                    ", Deligne excess " + sci(std::max(deligne, 0.0)) + " (tol 1e-10); tau(1..10) " +
                    (tau ? "exact" : "MISMATCH")};
}

// ---------------------------------------------------------------- 3
Outcome exact_petersson() {
  double worst = 0.0;
  int worst_k = 0;
  for (int k = 12; k <= 30; k += 2)
    for (int m = 1; m <= 10; ++m)
      for (int n = 1; n <= 10; ++n) {
        const auto r = trace::exact_petersson_check(weight_data(k), m, n);
        if (std::abs(r.lhs - r.rhs) > worst) {
          worst = std::abs(r.lhs - r.rhs);
          worst_k = k;
        }
      }
  return {worst < 1e-8, "k=12..30 m,n<=10: max |lhs-rhs| " + sci(worst) + " at k=" + std::to_string(worst_k) +
                            " (tol 1e-8)"};
}

// ---------------------------------------------------------------- 4
Outcome averaged_petersson() {
  constexpr double kBigK = 30.0;
  const auto w = trace::make_window(kBigK, 0.9, Bump::canonical(2.0, BumpKind::h_window), false);
  trace::WeightTable table;
  for (int k : w.weights_in_window()) table[k] = weight_data(k);
  std::vector<std::pair<int, int>> pool;
  for (int m = 1; m <= 900; ++m)
    for (int n = m; m * n <= 900; ++n) pool.push_back({m, n});
  std::mt19937_64 rng(20240613u);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int failures = 0;
  double worst = 0.0;
  std::string worst_pair;
  for (int i = 0; i < 20; ++i) {
    const auto [m, n] = pool[pick(rng)];
    const double lhs = trace::averaged_petersson_lhs(m, n, w, table);
    const auto rhs = trace::averaged_petersson_rhs(m, n, w);
    const double ratio = std::abs(lhs - rhs.main - rhs.kloosterman_term) / (10.0 * rhs.error_budget);
    if (ratio > 1.0) ++failures;
    if (ratio > worst) {
      worst = ratio;
      worst_pair = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
    }
  }
  return {failures == 0, "K=30, 20 seeded pairs mn<=900: " + std::to_string(failures) +
                             " exceed 10x budget; worst residual/(10 budget) " + sci(worst) + " at " + worst_pair};
}

// ---------------------------------------------------------------- 5
Outcome mellin_apparatus() {
  const Bump psi = Bump::canonical(2.0, BumpKind::psi_symmetric);
  const testfn::MellinSampler sampler(psi, 2100.0);
  const auto spec = testfn::default_contour(psi, 1.0, psi.support_lo());
  const testfn::ContourSamples samples([&](testfn::cplx s) { return sampler(s); }, spec);
  double round_trip = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double y = std::exp(std::log(psi.support_lo()) + std::log(psi.support_hi() / psi.support_lo()) * (i + 0.5) / 50.0);
    round_trip = std::max(round_trip, std::abs(samples.invert(y).value - psi(y)));
  }
  double symmetry = 0.0;
  for (double sigma : {-2.0, -0.5, 0.5, 1.0, 2.0})
    for (double t = 0.0; t <= 50.0; t += 2.5)
      symmetry = std::max(symmetry, std::abs(testfn::mellin(psi, {sigma, t}) - testfn::mellin(psi, {-sigma, -t})));

  // |psi~(1+it)| (1+t)^4 <= 4 int |g''''|, g(u) = psi(e^-u) e^u
  auto g = [&](double u) { return psi(std::exp(-u)) * std::exp(u); };
  const double l = std::log(psi.support_hi()), h = 1e-3;
  double constant = 0.0;
  const int nodes = 4000;
  for (int i = 0; i < nodes; ++i) {
    const double u = -l + 2 * l * (i + 0.5) / nodes;
    const double d4 = (g(u + 2 * h) - 4 * g(u + h) + 6 * g(u) - 4 * g(u - h) + g(u - 2 * h)) / std::pow(h, 4);
    constant += std::abs(d4) * 2 * l / nodes;
  }
  constant *= 4.0 * 1.01;
  double decay = 0.0;
  for (double t = 0.0; t <= 100.0; t += 0.25) decay = std::max(decay, std::abs(sampler({1.0, t})) * std::pow(1 + t, 4));
  const bool pass = round_trip < 1e-6 && symmetry < 1e-10 && decay <= constant;
  return {pass, "round trip " + sci(round_trip) + " (tol 1e-6), symmetry " + sci(symmetry) +
                    " (tol 1e-10), sup (1+t)^4|psi~| " + sci(decay) + " vs constant " + sci(constant)};
}

// ---------------------------------------------------------------- 6
Outcome shifted_convolution() {
  const Bump psi = Bump::canonical(2.0, BumpKind::psi_symmetric);
  bool within = true;
  double worst_ratio = 0.0;
  std::vector<double> blocks;
  for (int k = 12; k <= 60; k += 4) {
    double residual = 0.0;
    for (const auto& f : weight_data(k).forms)
      residual = std::max(residual, std::abs(mass::s_psi_direct(f, psi) - mass::s_psi_approx(f, psi)));
    const double bound = 10.0 * std::pow(k, -0.5 + 0.05);
    within = within && residual <= bound;
    worst_ratio = std::max(worst_ratio, residual / bound);
    const auto j = static_cast<std::size_t>(std::floor(std::log2(k / 12.0)));
    if (blocks.size() <= j) blocks.resize(j + 1, 0.0);
    blocks[j] = std::max(blocks[j], residual);
  }
  bool trend = true;
  std::string shown;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j > 0) trend = trend && blocks[j] <= blocks[j - 1];
    shown += (j ? " " : "") + sci(blocks[j]);
  }
  return {within && trend, "k=12..60 step 4: max residual/bound " + sci(worst_ratio) +
                               "; dyadic-block maxima " + shown + (trend ? " non-increasing" : " NOT non-increasing")};
}

// ---------------------------------------------------------------- 7
Outcome diagonal_asymptotics() {
  const Bump psi = Bump::canonical(2.0, BumpKind::psi_symmetric);
  const Bump h = Bump::canonical(2.0, BumpKind::h_window);
  const auto md = variance::mellin_data(psi, psi);
  double prev = INFINITY;
  bool trend = true;
  std::string shown;
  for (double big_k : {200.0, 400.0, 800.0, 1600.0}) {
    const auto w = trace::make_window(big_k, 0.9, h, true);
    const double ratio = variance::diagonal_numeric(w, psi, psi).value / variance::diagonal_asymptotic(w, md).value;
    const double gap = std::abs(ratio - 1.0);
    trend = trend && gap <= prev;
    prev = gap;
    shown += (shown.empty() ? "" : ", ") + format_number(big_k) + ":" + sci(ratio);
  }
  return {trend, "ratio numeric/asymptotic " + shown + (trend ? "; |ratio-1| non-increasing" : "; |ratio-1| increases")};
}

// ---------------------------------------------------------------- 8
Outcome stationary_phase() {
  double worst = 0.0;
  int failures = 0;
  auto record = [&](double value, double budget) {
    worst = std::max(worst, value / budget);
    if (value > budget) ++failures;
  };
  for (double big_y : {10.0, 40.0, 160.0, 640.0}) {
    const auto r = oscillatory::stationary_phase_eval(cli::fresnel_problem(big_y));
    record(std::abs(r.direct - r.main), 10.0 * r.err_envelope);
  }
  for (const auto& p : cli::random_phase_problems(20, 20240611u, true)) {
    const auto r = oscillatory::stationary_phase_eval(p);
    record(std::abs(r.direct - r.main), 10.0 * r.err_envelope);
  }
  for (const auto& p : cli::random_phase_problems(20, 20240612u, false)) {
    const auto r = oscillatory::nonstationary_bound_check(p, 2);
    record(std::abs(r.integral), 10.0 * r.envelope);
  }
  return {failures == 0, "4 Fresnel + 20 stationary + 20 first-derivative cases: " + std::to_string(failures) +
                             " outside 10x envelope; worst error/(10 envelope) " + sci(worst)};
}

// ---------------------------------------------------------------- 9
std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome variance_pipeline() {
  const fs::path base = fs::temp_directory_path() / ("qvar-acceptance-" + std::to_string(::getpid()));
  std::vector<fs::path> dirs = {base / "a", base / "b"};
  for (const auto& d : dirs) {
    const std::string cache = g_cache.string(), out = d.string();
    const char* argv[] = {"qvar", "variance", "--K", "40", "--theta", "0.9", "--cache-dir", cache.c_str(), "--out", out.c_str()};
    std::ostringstream sink, err;
    const int code = cli::run_cli(10, argv, sink, err);
    if (code != cli::kExitOk) return {false, "variance command exited " + std::to_string(code) + ": " + err.str()};
  }
  bool identical = true;
  for (const char* name : {"variance_report.json", "variance_ratios.csv", "variance_mass.csv"})
    identical = identical && slurp(dirs[0] / name) == slurp(dirs[1] / name);
  const auto json = nlohmann::json::parse(slurp(dirs[0] / "variance_report.json"));
  const double lhs = json["lhs_empirical"].get<double>();
  std::ifstream mass_file(dirs[0] / "variance_mass.csv");
  const auto rows = mass::read_csv(mass_file);
  // mu from direct quadrature against the pair expansion S + (E_res + E)
  double decomposition = 0.0;
  for (const auto& r : rows) decomposition = std::max(decomposition, std::abs(r.mu - r.s_direct - r.diagonal) / std::abs(r.mu));
  std::string ratios;
  for (const auto& [name, value] : json["ratios"].items())
    ratios += (ratios.empty() ? "" : ", ") + name + "=" + sci(value.get<double>());
  fs::remove_all(base);
  const bool pass = !rows.empty() && lhs >= 0.0 && decomposition < 1e-9 && identical;
  return {pass, "K=40, " + std::to_string(rows.size()) + " forms: lhs " + sci(lhs) + ", decomposition " +
                    sci(decomposition) + " (tol 1e-9), reports " + (identical ? "identical" : "DIFFER") +
                    " across runs; ratios (not asserted) " + ratios};
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string cache = "eigen-cache";
  std::vector<int> only;
  app.add_option("--cache-dir", cache, "Eigen-data cache directory");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  g_cache = cache;

  const std::vector<Criterion> criteria = {
      {1, "Kloosterman identity", 120, kloosterman_identity},
      {2, "eigenform suite", 300, eigenform_suite},
      {3, "exact Petersson closure", 300, exact_petersson},
      {4, "averaged Petersson", 600, averaged_petersson},
      {5, "Mellin apparatus", 60, mellin_apparatus},
      {6, "shifted convolution", 600, shifted_convolution},
      {7, "diagonal asymptotics", 900, diagonal_asymptotics},
      {8, "stationary phase and derivative test", 120, stationary_phase},
      {9, "variance pipeline", 1800, variance_pipeline},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds < c.limit_seconds;
    if (!pass) ++failed;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << seconds;
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.detail << "; "
              << time.str() << " s (limit " << c.limit_seconds << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
