#include "sdwsn/textio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdwsn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_mat(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

Mat read_mat(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file: " + path);
  const std::size_t cols = rows[0].size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw IoError("ragged matrix file: " + path);
    data.insert(data.end(), row.begin(), row.end());
  }
  return Mat(static_cast<int>(rows.size()), static_cast<int>(cols),
             std::move(data));
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), ncols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_);
  if (out) out << buf_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw InvalidInput("CsvWriter: column mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

std::string CsvWriter::cell(double v) { return format_double(v); }

std::string CsvWriter::cell(int v) { return std::to_string(v); }

Mat read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw IoError("not a PGM file: " + path);
  auto next_token = [&in, &path]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw IoError("truncated PGM header: " + path);
  };
  const int cols = std::stoi(next_token());
  const int rows = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (rows <= 0 || cols <= 0 || maxval <= 0 || maxval > 65535)
    throw IoError("bad PGM header: " + path);
  Mat img(rows, cols);
  if (magic == "P2") {
    for (double& v : img.data()) {
      int pix;
      if (!(in >> pix)) throw IoError("truncated PGM data: " + path);
      v = static_cast<double>(pix) / maxval;
    }
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    for (double& v : img.data()) {
      unsigned char b[2] = {0, 0};
      in.read(reinterpret_cast<char*>(b), bytes);
      if (!in) throw IoError("truncated PGM data: " + path);
      const int pix = bytes == 2 ? (b[0] << 8) | b[1] : b[0];
      v = static_cast<double>(pix) / maxval;
    }
  }
  return img;
}

void write_pgm(const std::string& path, const Mat& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  for (double v : img.data()) {
    const double clamped = std::min(1.0, std::max(0.0, v));
    out.put(static_cast<char>(std::lround(clamped * 255.0)));
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sdwsn
