#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace commsense::csv {

// 17 significant digits; parses back to the identical double.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Parsers throw DataError naming `what` on malformed or trailing input.
double parse_double(std::string_view field, std::string_view what);
std::int64_t parse_int(std::string_view field, std::string_view what);
std::uint64_t parse_uint(std::string_view field, std::string_view what);

// Whole-file helpers; failures raise IoError with the path.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace commsense::csv
