#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace eigenvi::harness {

/// %.17g, which round-trips every finite double. Non-finite values are not
/// representable and throw std::invalid_argument.
std::string format_double(double x);
/// Empty field for nullopt.
std::string format_optional(const std::optional<double>& x);

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_escape(std::string_view field);

/// Writes rows terminated by CRLF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

/// Parses an RFC 4180 document (CRLF or LF line breaks). Throws
/// std::invalid_argument on an unterminated quoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace eigenvi::harness
