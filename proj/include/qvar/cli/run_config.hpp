#pragma once

#include <string>
#include <vector>

#include "qvar/testfn/bump.hpp"
#include "qvar/trace/petersson.hpp"
#include "qvar/variance/variance.hpp"

namespace qvar::cli {

struct RunConfig {
  std::string command;
  std::string suite;
  double big_k = 40.0;
  double big_g = 0.0;  // 0: derive from theta
  double theta = 0.9;
  double alpha = 2.0;
  std::string bump_family = "canonical";  // canonical | mean-zero
  double beta = 3.0;                      // second scale of the mean-zero family
  std::string weights;                    // "12-60", "12-60:4", "12,14,20"
  int truncation = 0;                     // 0: default per weight
  std::string cache_dir = "eigen-cache";
  std::string out = ".";
  unsigned threads = 1;
  double tolerance_scale = 1.0;
  double census_eps = 0.05;
  double contour_sigma = 1.0;
  variance::ExponentConfig exponents;

  /// Throws usage naming the first violated precondition.
  void validate() const;
  double g_value() const;
  std::vector<int> weight_list() const;
  int truncation_for(int k) const;
  testfn::Bump psi() const;
  testfn::Bump window() const;
  trace::WindowWeights variance_window() const;
};

/// Parses a weight range specification; even weights >= 12 only.
std::vector<int> parse_weights(const std::string& spec);

}  // namespace qvar::cli
