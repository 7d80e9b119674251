#pragma once

#include <charconv>
#include <string>

namespace qvar {

/// Shortest round-trip decimal form; independent of the C locale.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Fixed 17 significant digits in scientific notation.
inline std::string format_sci(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

}  // namespace qvar
