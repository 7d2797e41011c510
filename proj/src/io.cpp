#include "kgdelta/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "kgdelta/errors.hpp"

namespace kgdelta::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& os, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns,
               const std::string& status) {
  if (header.size() != columns.size())
    throw Error("CSV header and column counts differ");
  std::size_t rows = columns.empty() ? 0 : columns[0]->size();
  for (const auto* col : columns)
    if (col->size() != rows) throw Error("CSV columns have unequal lengths");
  write_header(os, header);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      os << format_double((*columns[c])[r]);
    }
    os << '\n';
  }
  if (!status.empty()) os << "# status=" << status << '\n';
}

void write_csv_rows(std::ostream& os, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  write_header(os, header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error("CSV row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << row[c];
    }
    os << '\n';
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace kgdelta::io
