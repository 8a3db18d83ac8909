#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace posdist::io {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Splits one CSV record; handles double-quoted fields with `""` escapes.
std::vector<std::string> split_csv(std::string_view line);
std::string csv_field(std::string_view value);

std::string read_file(const std::filesystem::path& path);
/// Truncates and writes, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a, used for provenance hashes.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace posdist::io
