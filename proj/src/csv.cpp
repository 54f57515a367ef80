#include "roughldp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace roughldp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += names[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_double(values[i]);
  }
  buf_ += '\n';
}

void CsvWriter::raw_line(const std::string& line) {
  buf_ += line;
  buf_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
  write_file_atomic(path, buf_);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

}  // namespace roughldp
