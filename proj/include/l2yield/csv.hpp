#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace l2yield::csv {

// Plain comma-separated records: no quoting, `.` decimal separator, no
// thousands grouping. Surrounding whitespace and a trailing '\r' are trimmed.

struct Record {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next non-blank line. Returns false at end of input.
  bool next(Record& record);

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::vector<std::string> split(std::string_view line);
std::string_view trim(std::string_view s);

// Field parsers. Throw ParseError naming `line` and `field` on failure.
double parse_double(std::string_view text, std::size_t line, const std::string& field);
std::int64_t parse_int(std::string_view text, std::size_t line, const std::string& field);

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace l2yield::csv
