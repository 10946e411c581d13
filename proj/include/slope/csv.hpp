#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace slope::csv {

/// 17 significant digits, '.' decimal; lossless for doubles.
std::string format_real(double v);

/// RFC-4180 field quoting.
std::string quote(std::string_view field);

/// Writes '#schema=<name>/v<version>', then the header row, then records.
class Writer {
 public:
  Writer(std::ostream& out, std::string_view schema, int version,
         const std::vector<std::string>& columns);

  Writer& field(double v);
  Writer& field(long long v);
  Writer& field(int v) { return field(static_cast<long long>(v)); }
  Writer& field(std::string_view v);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

/// Parsed file: schema line (without '#schema='), header, and string cells.
struct Table {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

Table read(std::istream& in);

}  // namespace slope::csv
