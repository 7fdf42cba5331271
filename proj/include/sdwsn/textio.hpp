#pragma once

#include <string>
#include <vector>

#include "sdwsn/mat.hpp"

namespace sdwsn {

/// Matrix text format: one row per line, comma-separated, written with 17
/// significant digits. The reader also accepts whitespace separators.
void write_mat(const std::string& path, const Mat& m);
Mat read_mat(const std::string& path);

std::string format_double(double v);  // shortest round-trippable form

/// CSV with a fixed header; every cell is formatted deterministically.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  static std::string cell(double v);
  static std::string cell(int v);

 private:
  std::string path_;
  std::string buf_;
  std::size_t ncols_;
};

/// Grayscale image in PGM form (P2 or P5 accepted on read, P5 written),
/// normalized to [0, 1].
Mat read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Mat& img);

}  // namespace sdwsn
