#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridfeat::csv {

/// Splits one line on `delim`. No quoting support: none of the supported
/// dataset layouts quote fields.
std::vector<std::string_view> split(std::string_view line, char delim = ',');

std::string_view trim(std::string_view text);

/// Strict parse of the whole (trimmed) field; nullopt for empty, "?" or garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Calls `fn(line)` for each line with trailing '\r' removed.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line);
    start = end + 1;
  }
}

}  // namespace gridfeat::csv
