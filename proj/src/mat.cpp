#include "sdwsn/mat.hpp"

#include <cmath>
#include <cstdlib>

#include "sdwsn/kernels.hpp"

namespace sdwsn {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows >= 0 && cols >= 0, "Mat: negative dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Mat::Mat(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(rows >= 0 && cols >= 0, "Mat: negative dimension");
  require(data_.size() == static_cast<std::size_t>(rows) * cols,
          "Mat: entry count does not match rows*cols");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == cols_, "Mat: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(std::span<const double> d) {
  Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::col_vec(std::span<const double> v) {
  Mat m(static_cast<int>(v.size()), 1);
  for (int i = 0; i < m.rows(); ++i) m(i, 0) = v[i];
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::block(int r0, int c0, int nrows, int ncols) const {
  require(r0 >= 0 && c0 >= 0 && nrows >= 0 && ncols >= 0 && r0 + nrows <= rows_ &&
              c0 + ncols <= cols_,
          "Mat::block: range out of bounds");
  Mat b(nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Mat::set_block(int r0, int c0, const Mat& b) {
  require(r0 >= 0 && c0 >= 0 && r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_,
          "Mat::set_block: range out of bounds");
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Mat& Mat::operator+=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Mat: shape mismatch in +=");
  kernels::axpy(data_.size(), 1.0, o.data_.data(), data_.data());
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Mat: shape mismatch in -=");
  kernels::axpy(data_.size(), -1.0, o.data_.data(), data_.data());
  return *this;
}

Mat& Mat::operator*=(double a) {
  kernels::scal(data_.size(), a, data_.data());
  return *this;
}

double Mat::frob_sq() const { return kernels::nrm2sq(data_.size(), data_.data()); }

double Mat::frob() const { return std::sqrt(frob_sq()); }

double Mat::trace() const {
  require(rows_ == cols_, "Mat::trace: square matrix required");
  double t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Mat::is_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Mat::max_abs_diff(const Mat& o) const {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Mat: shape mismatch in diff");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - o.data_[i]));
  return m;
}

Mat Mat::scaled(double a) const {
  Mat m = *this;
  m *= a;
  return m;
}

void Mat::symmetrize() {
  require(rows_ == cols_, "Mat::symmetrize: square matrix required");
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

Mat operator+(Mat a, const Mat& b) {
  a += b;
  return a;
}

Mat operator-(Mat a, const Mat& b) {
  a -= b;
  return a;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), "Mat: shape mismatch in *");
  Mat c(a.rows(), b.cols());
  const std::size_t n = static_cast<std::size_t>(b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    double* ci = c.row_ptr(i);
    for (int l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail != 0.0) kernels::axpy(n, ail, b.row_ptr(l), ci);
    }
  }
  return c;
}

Mat operator*(double a, Mat m) {
  m *= a;
  return m;
}

Mat mul_at_b(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows(), "mul_at_b: shape mismatch");
  Mat c(a.cols(), b.cols());
  const std::size_t n = static_cast<std::size_t>(b.cols());
  for (int l = 0; l < a.rows(); ++l) {
    const double* bl = b.row_ptr(l);
    for (int i = 0; i < a.cols(); ++i) {
      const double v = a(l, i);
      if (v != 0.0) kernels::axpy(n, v, bl, c.row_ptr(i));
    }
  }
  return c;
}

Mat mul_a_bt(const Mat& a, const Mat& b) {
  require(a.cols() == b.cols(), "mul_a_bt: shape mismatch");
  Mat c(a.rows(), b.rows());
  const std::size_t n = static_cast<std::size_t>(a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row_ptr(i);
    for (int j = 0; j < b.rows(); ++j) {
      c(i, j) = kernels::dot(n, ai, b.row_ptr(j));
    }
  }
  return c;
}

Mat vstack(std::span<const Mat> blocks) {
  if (blocks.empty()) return Mat();
  int rows = 0;
  const int cols = blocks[0].cols();
  for (const Mat& b : blocks) {
    require(b.cols() == cols, "vstack: column mismatch");
    rows += b.rows();
  }
  Mat out(rows, cols);
  int r = 0;
  for (const Mat& b : blocks) {
    out.set_block(r, 0, b);
    r += b.rows();
  }
  return out;
}

Mat hstack(std::span<const Mat> blocks) {
  if (blocks.empty()) return Mat();
  int cols = 0;
  const int rows = blocks[0].rows();
  for (const Mat& b : blocks) {
    require(b.rows() == rows, "hstack: row mismatch");
    cols += b.cols();
  }
  Mat out(rows, cols);
  int c = 0;
  for (const Mat& b : blocks) {
    out.set_block(0, c, b);
    c += b.cols();
  }
  return out;
}

}  // namespace sdwsn
