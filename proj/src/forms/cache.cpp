#include "qvar/forms/cache.hpp"

#include <charconv>
#include <map>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qvar/error.hpp"

namespace qvar::forms {

namespace fs = std::filesystem;

std::string forms_version() {
  return "miller-basis/gmp-exact/t2-mpfr-newton/afe-sym2-trapezoid-h0.2/v2";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  require(ec == std::errc(), ErrorKind::io, "number formatting failed");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::io,
          "malformed number '" + std::string(text) + "'");
  return v;
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string body_text(const WeightData& d) {
  std::ostringstream os;
  auto row = [&](const char* key, auto getter) {
    os << key;
    for (const auto& f : d.forms) os << ' ' << format_double(getter(f));
    os << '\n';
  };
  row("l_sym2", [](const Eigenform& f) { return f.l_sym2; });
  row("a1_sq", [](const Eigenform& f) { return f.a1_sq; });
  row("log_a1_sq", [](const Eigenform& f) { return f.log_a1_sq; });
  for (std::size_t i = 0; i < d.forms.size(); ++i) {
    os << "coords " << i;
    for (double c : d.forms[i].coords) os << ' ' << format_double(c);
    os << '\n';
  }
  os << "rows\n";
  for (int n = 1; n <= d.truncation; ++n) {
    os << n;
    for (const auto& f : d.forms) os << ' ' << format_double(f.lambda[static_cast<std::size_t>(n)]);
    os << '\n';
  }
  return os.str();
}

}  // namespace

fs::path cache_path(const fs::path& dir, int k, int truncation) {
  return dir / ("eigen_k" + std::to_string(k) + "_N" + std::to_string(truncation) + ".txt");
}

void write_cache(const WeightData& d, const fs::path& file) {
  const std::string body = body_text(d);
  std::ostringstream head;
  head << "format_version " << kCacheFormatVersion << '\n'
       << "forms_version " << hex(fnv1a(forms_version())) << '\n'
       << "k " << d.weight << '\n'
       << "N " << d.truncation << '\n'
       << "dim " << d.forms.size() << '\n'
       << "data_checksum " << hex(fnv1a(body)) << '\n';
  if (!file.parent_path().empty()) fs::create_directories(file.parent_path());
  const fs::path tmp = file.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + tmp.string());
    out << head.str() << body;
    require(static_cast<bool>(out), ErrorKind::io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, file);
}

std::optional<WeightData> read_cache(const fs::path& file, int k, int truncation) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream is(text);
  std::string line;
  std::map<std::string, std::string> header;
  std::size_t consumed = 0;
  for (int i = 0; i < 6 && std::getline(is, line); ++i) {
    consumed += line.size() + 1;
    auto parts = split(line);
    if (parts.size() != 2) return std::nullopt;
    header[std::string(parts[0])] = std::string(parts[1]);
  }
  if (header["format_version"] != std::to_string(kCacheFormatVersion)) return std::nullopt;
  if (header["forms_version"] != hex(fnv1a(forms_version()))) return std::nullopt;
  if (header["k"] != std::to_string(k) || header["N"] != std::to_string(truncation)) return std::nullopt;
  const std::string_view body = std::string_view(text).substr(std::min(consumed, text.size()));
  if (header["data_checksum"] != hex(fnv1a(body))) return std::nullopt;

  WeightData d;
  d.weight = k;
  d.truncation = truncation;
  const std::size_t dim = std::stoul(header["dim"]);
  d.forms.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    d.forms[i].weight = k;
    d.forms[i].conjugacy_id = static_cast<int>(i);
    d.forms[i].lambda.assign(static_cast<std::size_t>(truncation) + 1, 0.0);
  }
  bool in_rows = false;
  while (std::getline(is, line)) {
    auto parts = split(line);
    if (parts.empty()) continue;
    if (in_rows) {
      require(parts.size() == dim + 1, ErrorKind::io, "bad data row in " + file.string());
      const int n = static_cast<int>(parse_double(parts[0]));
      require(n >= 1 && n <= truncation, ErrorKind::io, "row index out of range in " + file.string());
      for (std::size_t i = 0; i < dim; ++i) d.forms[i].lambda[static_cast<std::size_t>(n)] = parse_double(parts[i + 1]);
      continue;
    }
    if (parts[0] == "rows") {
      in_rows = true;
    } else if (parts[0] == "coords") {
      const std::size_t i = std::stoul(std::string(parts[1]));
      require(i < dim, ErrorKind::io, "bad coords row in " + file.string());
      for (std::size_t j = 2; j < parts.size(); ++j) d.forms[i].coords.push_back(parse_double(parts[j]));
    } else {
      require(parts.size() == dim + 1, ErrorKind::io, "bad header row in " + file.string());
      for (std::size_t i = 0; i < dim; ++i) {
        const double v = parse_double(parts[i + 1]);
        if (parts[0] == "l_sym2") d.forms[i].l_sym2 = v;
        else if (parts[0] == "a1_sq") d.forms[i].a1_sq = v;
        else if (parts[0] == "log_a1_sq") d.forms[i].log_a1_sq = v;
      }
    }
  }
  return d;
}

LoadResult load_or_build(int k, int truncation, const fs::path& dir) {
  const fs::path file = cache_path(dir, k, truncation);
  if (auto cached = read_cache(file, k, truncation)) return {std::move(*cached), true};
  WeightData d = eigenforms(k, truncation);
  write_cache(d, file);
  return {std::move(d), false};
}

}  // namespace qvar::forms
