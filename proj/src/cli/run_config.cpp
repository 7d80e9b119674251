#include "qvar/cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qvar/error.hpp"
#include "qvar/forms/eigenform.hpp"

namespace qvar::cli {

namespace {

int whole_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc::result_out_of_range) throw std::out_of_range(text);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::invalid_argument(text);
  return v;
}

}  // namespace

std::vector<int> parse_weights(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      int lo = 0, hi = 0, step = 2;
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        lo = hi = whole_int(item);
      } else {
        lo = whole_int(item.substr(0, dash));
        std::string rest = item.substr(dash + 1);
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
          step = whole_int(rest.substr(colon + 1));
          rest = rest.substr(0, colon);
        }
        hi = whole_int(rest);
      }
      require(lo <= hi, ErrorKind::usage, "empty weight range: " + item);
      require(step > 0 && step % 2 == 0, ErrorKind::usage, "weight step must be positive and even: " + item);
      for (int k = lo; k <= hi; k += step) {
        require(k >= 12 && k % 2 == 0, ErrorKind::usage, "weights must be even and >= 12: " + item);
        out.push_back(k);
      }
    } catch (const std::invalid_argument&) {
      raise(ErrorKind::usage, "cannot parse weight range '" + item + "'");
    } catch (const std::out_of_range&) {
      raise(ErrorKind::usage, "weight out of range in '" + item + "'");
    }
  }
  return out;
}

void RunConfig::validate() const {
  require(big_k > 0.0, ErrorKind::usage, "--K must be positive");
  require(theta > 0.0 && theta < 1.0, ErrorKind::usage, "--theta must lie in (0, 1)");
  require(big_g >= 0.0 && g_value() <= big_k, ErrorKind::usage, "--G must satisfy 0 < G <= K");
  require(alpha > 1.0, ErrorKind::usage, "--alpha must exceed 1");
  require(bump_family == "canonical" || bump_family == "mean-zero", ErrorKind::usage,
          "--bump must be canonical or mean-zero");
  require(bump_family != "mean-zero" || beta > 1.0, ErrorKind::usage, "--beta must exceed 1");
  require(threads >= 1, ErrorKind::usage, "--threads must be at least 1");
  require(tolerance_scale > 0.0, ErrorKind::usage, "--tolerance-scale must be positive");
  require(truncation >= 0, ErrorKind::usage, "--truncation must be non-negative");
  require(census_eps > 0.0, ErrorKind::usage, "--eps must be positive");
  (void)weight_list();
}

double RunConfig::g_value() const { return big_g > 0.0 ? big_g : std::pow(big_k, theta); }

std::vector<int> RunConfig::weight_list() const { return parse_weights(weights); }

int RunConfig::truncation_for(int k) const { return truncation > 0 ? truncation : forms::default_truncation(k); }

testfn::Bump RunConfig::psi() const {
  if (bump_family == "mean-zero") return testfn::Bump::mean_zero(alpha, beta);
  return testfn::Bump::canonical(alpha, testfn::BumpKind::psi_symmetric);
}

testfn::Bump RunConfig::window() const { return testfn::Bump::canonical(2.0, testfn::BumpKind::h_window); }

trace::WindowWeights RunConfig::variance_window() const {
  trace::WindowWeights w{big_k, g_value(), window(), true};
  w.validate();
  return w;
}

}  // namespace qvar::cli
