#include "l2yield/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "l2yield/errors.hpp"

namespace l2yield::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto piece = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.emplace_back(trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool Reader::next(Record& record) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    record.line = line_;
    record.fields = split(line);
    return true;
  }
  return false;
}

double parse_double(std::string_view text, std::size_t line, const std::string& field) {
  text = trim(text);
  if (text.empty()) throw ParseError(line, field, "empty value");
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, field, "not a decimal number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, field, "non-finite value");
  return value;
}

std::int64_t parse_int(std::string_view text, std::size_t line, const std::string& field) {
  text = trim(text);
  if (text.empty()) throw ParseError(line, field, "empty value");
  if (text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, field, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  return fmt::format("{}", value);
}

}  // namespace l2yield::csv
