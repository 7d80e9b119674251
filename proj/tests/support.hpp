#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <vector>

#include "qvar/forms/cache.hpp"
#include "qvar/trace/petersson.hpp"

namespace qvar::test {

inline std::filesystem::path cache_dir() { return QVAR_TEST_CACHE_DIR; }

/// Eigen-data at the default truncation, built into the shared cache if absent.
inline const forms::WeightData& weight_data(int k) {
  static std::mutex mutex;
  static std::map<int, forms::WeightData> loaded;
  std::lock_guard lock(mutex);
  auto it = loaded.find(k);
  if (it == loaded.end())
    it = loaded.emplace(k, forms::load_or_build(k, forms::default_truncation(k), cache_dir()).data).first;
  return it->second;
}

inline trace::WeightTable table_for(const std::vector<int>& weights) {
  trace::WeightTable t;
  for (int k : weights) t[k] = weight_data(k);
  return t;
}

/// dim S_k for level one from the classical dimension formula.
inline int cusp_dim(int k) {
  if (k < 4 || k % 2) return 0;
  const int full = (k % 12 == 2) ? k / 12 : k / 12 + 1;
  return full - 1;
}

}  // namespace qvar::test
