#include "slope/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "slope/error.hpp"

namespace slope::csv {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Writer::Writer(std::ostream& out, std::string_view schema, int version,
               const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  out_ << "#schema=" << schema << "/v" << version << "\r\n";
  for (const auto& c : columns) field(std::string_view(c));
  end_row();
}

void Writer::separator() {
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

Writer& Writer::field(double v) {
  separator();
  out_ << format_real(v);
  return *this;
}

Writer& Writer::field(long long v) {
  separator();
  out_ << v;
  return *this;
}

Writer& Writer::field(std::string_view v) {
  separator();
  out_ << quote(v);
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_) throw DomainError("csv::Writer: row has the wrong number of fields");
  out_ << "\r\n";
  in_row_ = 0;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DomainError("csv::Table: no column " + std::string(name));
}

namespace {

/// One RFC-4180 record; false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& cells) {
  cells.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cell;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell += '"';
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\r') {
      // CRLF or bare CR terminates the record.
      if (in.peek() == '\n') in.get(c);
      break;
    } else if (c == '\n') {
      break;
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return true;
}

}  // namespace

Table read(std::istream& in) {
  Table t;
  std::vector<std::string> cells;
  if (!read_record(in, cells) || cells.empty() || cells[0].rfind("#schema=", 0) != 0)
    throw DomainError("csv::read: missing '#schema=' line");
  t.schema = cells[0].substr(8);
  if (!read_record(in, t.header)) throw DomainError("csv::read: missing header row");
  while (read_record(in, cells)) {
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() != t.header.size()) throw DomainError("csv::read: ragged row");
    t.rows.push_back(cells);
  }
  return t;
}

}  // namespace slope::csv
