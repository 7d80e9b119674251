#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qvar/cli/run_config.hpp"
#include "qvar/oscillatory/oscillatory.hpp"

namespace qvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_eigenforms(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_mass(const RunConfig& cfg, std::ostream& out);
int cmd_variance(const RunConfig& cfg, std::ostream& out);
int cmd_census(const RunConfig& cfg, std::ostream& out);

/// Eigen-data for the given weights from the cache directory; with
/// build_missing false, absent weights raise missing_data naming them.
trace::WeightTable load_table(const RunConfig& cfg, const std::vector<int>& weights, bool build_missing);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline const std::vector<std::string> kSuites = {"kloosterman", "petersson", "mellin", "shifted", "stationary"};

/// Runs one verification suite; tolerances are multiplied by cfg.tolerance_scale.
std::vector<CheckResult> run_suite(const std::string& suite, const RunConfig& cfg);

/// Phase Y t^2 with a bump amplitude on (-1, 1).
oscillatory::PhaseProblem fresnel_problem(double big_y);
/// Seeded random problems: a single stationary point inside the support, or
/// a linear phase with |phase'| = R throughout.
std::vector<oscillatory::PhaseProblem> random_phase_problems(int count, unsigned seed, bool stationary);

}  // namespace qvar::cli
