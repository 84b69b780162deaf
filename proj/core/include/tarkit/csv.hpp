#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tarkit::csv {

/// Quote a field if it contains a comma, quote, or newline (RFC 4180 style).
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);

/// Shortest round-trip decimal form. Locale independent, so two processes
/// serializing the same double produce the same bytes.
std::string format_double(double value);

/// Streaming reader that understands quoted fields with embedded commas,
/// quotes, and newlines. Reports the physical line a record started on.
class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Read one record. Returns false at end of input.
  /// Throws ParseError on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  std::size_t record_line() const { return record_line_; }

private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 1;
};

}  // namespace tarkit::csv
