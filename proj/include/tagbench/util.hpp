#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tagbench {

/// Exact non-negative ratio; percentages are rendered from this without
/// passing through floating point.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  double percent() const { return 100.0 * value(); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Percentage of `r` rounded half-up to two decimals, e.g. 4157/10000 -> "41.57".
std::string format_percent(const Ratio& r);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Strips one trailing '\r' so CRLF input reads like LF input.
std::string_view strip_cr(std::string_view line);

bool contains_space(std::string_view text);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace tagbench
