#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qsense::cli {

/// Numeric cell with 12 significant digits (schema-stable formatting).
std::string csv_num(double value);

class CsvFile {
public:
  CsvFile(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }
  std::size_t columns() const { return columns_; }

private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace qsense::cli
