#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace ans {

/// Comma-separated output with a header row; doubles carry 17 significant
/// digits so values round-trip bit exactly.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : os_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path.string());
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

 private:
  std::ofstream os_;
};

}  // namespace ans
