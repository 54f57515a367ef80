// CSV output with fixed 17-significant-digit formatting and atomic writes
// (tmp + rename), so identical runs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

namespace roughldp {

std::string format_double(double v);  // %.17g

class CsvWriter {
 public:
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw_line(const std::string& line);  // e.g. trailing comment block
  const std::string& buffer() const { return buf_; }

  // write buffer to path atomically
  void write(const std::string& path) const;

 private:
  std::string buf_;
};

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace roughldp
