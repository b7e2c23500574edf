#ifndef COURSEREC_CSV_HPP_
#define COURSEREC_CSV_HPP_

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "courserec/error.hpp"

namespace courserec::csv {

struct Row {
  int line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

inline Error parse_error(int line, const std::string& reason) {
  return Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason,
               std::to_string(line));
}

/// Comma-separated, double-quote escaped ("" inside quotes), LF or CRLF
/// record separators, optional UTF-8 BOM. Blank lines are skipped.
inline std::vector<Row> parse(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  int line = 1;
  row.line = 1;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = Row{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw parse_error(line, "unexpected quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_row();
        ++line;
        row.line = line;
        break;
      default:
        if (field_was_quoted) throw parse_error(line, "text after closing quote");
        field.push_back(c);
    }
  }
  if (in_quotes) throw parse_error(row.line, "unterminated quoted field");
  if (!field.empty() || !row.fields.empty() || field_was_quoted) end_row();
  return rows;
}

inline std::string quote(std::string_view field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  out.push_back('\n');
  return out;
}

inline std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

template <class Int>
Int parse_int(const std::string& text, int line, std::string_view column) {
  auto t = trim(text);
  Int value{};
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw parse_error(line, "column '" + std::string(column) + "' is not an integer: '" + text + "'");
  }
  return value;
}

/// Splits the header off `rows` and checks it against `required` (in order),
/// followed by any of `optional`. Returns the number of columns present.
inline std::size_t expect_header(const std::vector<Row>& rows,
                                 const std::vector<std::string>& required,
                                 const std::vector<std::string>& optional = {}) {
  auto expected = [&] {
    std::string s;
    for (const auto& c : required) s += (s.empty() ? "" : ",") + c;
    return s;
  };
  if (rows.empty()) throw parse_error(1, "missing header, expected '" + expected() + "'");
  const auto& header = rows.front();
  if (header.fields.size() < required.size() ||
      header.fields.size() > required.size() + optional.size()) {
    throw parse_error(header.line, "bad header, expected '" + expected() + "'");
  }
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const auto& want = i < required.size() ? required[i] : optional[i - required.size()];
    if (trim(header.fields[i]) != want) {
      throw parse_error(header.line, "bad header column '" + header.fields[i] + "', expected '" +
                                         want + "'");
    }
  }
  return header.fields.size();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path, path);
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path, path);
}

}  // namespace courserec::csv

#endif  // COURSEREC_CSV_HPP_
