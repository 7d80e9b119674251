#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace qvar {

/// Process-wide worker count used by every parallel loop. Defaults to 1.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, n) across the configured workers. Each index is
/// visited exactly once; callers write into per-index slots and reduce in
/// index order afterwards, so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

/// Neumaier-compensated running sum; order of add() calls fixes the result.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qvar
