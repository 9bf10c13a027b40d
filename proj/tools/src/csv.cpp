#include "csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qsense::cli {

std::string csv_num(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

CsvFile::CsvFile(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvFile::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("csv row width mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  out_.flush();
}

}  // namespace qsense::cli
