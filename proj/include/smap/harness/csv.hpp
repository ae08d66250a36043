#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace smap::harness {

/// Plain CSV: optional leading '#' comment line, header row, ',' separator,
/// numbers in scientific notation with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns, const std::string& comment = {});

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  void end_row();

  static std::string format(double x);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t filled_ = 0;
  std::string path_;
};

}  // namespace smap::harness
