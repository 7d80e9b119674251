#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qvar/forms/eigenform.hpp"

namespace qvar::forms {

inline constexpr int kCacheFormatVersion = 1;

/// Identifies the algorithm producing eigen-data; bumping it invalidates caches.
std::string forms_version();
std::uint64_t fnv1a(std::string_view text);

std::string format_double(double v);
double parse_double(std::string_view text);

std::filesystem::path cache_path(const std::filesystem::path& dir, int k, int truncation);

void write_cache(const WeightData& data, const std::filesystem::path& file);

/// nullopt when the file is missing, stale (other forms version or shape)
/// or fails its checksum.
std::optional<WeightData> read_cache(const std::filesystem::path& file, int k, int truncation);

struct LoadResult {
  WeightData data;
  bool cached = false;
};

LoadResult load_or_build(int k, int truncation, const std::filesystem::path& dir);

}  // namespace qvar::forms
