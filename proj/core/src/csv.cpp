#include "tarkit/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <system_error>

#include "tarkit/error.hpp"

namespace tarkit::csv {

std::string escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    out << escape(fields[i]);
  }
  out.put('\n');
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  int c = in_.get();
  if (c == std::istream::traits_type::eof()) return false;
  record_line_ = line_;

  std::string field;
  bool in_quotes = false;
  bool saw_any = false;
  while (true) {
    if (c == std::istream::traits_type::eof()) {
      if (in_quotes)
        throw ParseError("line " + std::to_string(record_line_) +
                         ": unterminated quoted field at end of file");
      fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        int peek = in_.peek();
        if (peek == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !saw_any) {
      in_quotes = true;
      saw_any = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      saw_any = false;
    } else if (ch == '\r') {
      // swallow; the \n that follows ends the record
    } else if (ch == '\n') {
      ++line_;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
      saw_any = true;
    }
    c = in_.get();
  }
}

}  // namespace tarkit::csv
