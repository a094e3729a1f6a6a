#pragma once

// Small text helpers shared by the file readers and writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stlf::text {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Whole-field decimal parse; rejects trailing junk and non-finite values.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<long long> parse_int(std::string_view s) noexcept;

/// Shortest form that round-trips (17 significant digits), "inf"/"-inf"/"nan" otherwise.
std::string format_exact(double v);
/// Fixed significant digits for human-facing tables.
std::string format_sig(double v, int digits = 7);

std::string read_file(const std::string& path);
/// Writes atomically enough for our purposes: whole buffer, truncating.
void write_file(const std::string& path, std::string_view content);

}  // namespace stlf::text
