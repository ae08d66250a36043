#include "smap/harness/csv.hpp"

#include <cmath>
#include <cstdio>

#include "smap/errors.hpp"

namespace smap::harness {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns, const std::string& comment)
    : out_(path, std::ios::trunc), columns_(columns.size()), path_(path) {
  if (!out_) throw FormatError("cannot open '" + path + "' for writing");
  if (!comment.empty()) out_ << "# " << comment << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

std::string CsvWriter::format(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (filled_ == columns_) throw FormatError(path_ + ": too many cells in row");
  if (filled_++) out_ << ',';
  if (s.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : s) out_ << (c == '"' ? std::string("\"\"") : std::string(1, c));
    out_ << '"';
  } else {
    out_ << s;
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format(x)); }
CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw FormatError(path_ + ": incomplete row");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace smap::harness
