#include "commsense/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>

#include "commsense/errors.hpp"

namespace commsense::csv {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

namespace {

template <typename T>
T parse_number(std::string_view field, std::string_view what) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw DataError(fmt::format("malformed {} '{}'", what, field));
  }
  return value;
}

}  // namespace

double parse_double(std::string_view field, std::string_view what) {
  return parse_number<double>(field, what);
}

std::int64_t parse_int(std::string_view field, std::string_view what) {
  return parse_number<std::int64_t>(field, what);
}

std::uint64_t parse_uint(std::string_view field, std::string_view what) {
  return parse_number<std::uint64_t>(field, what);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError(fmt::format("read failure on '{}'", path.string()));
  return lines;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError(fmt::format("write failure on '{}'", path.string()));
}

}  // namespace commsense::csv
