#pragma once

#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdwsn {

// Bad dimensions, bad arguments, malformed configs.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A decomposition failed to converge or produced non-finite values.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix required to be positive semidefinite is not.
struct NotPsdError : NumericalError {
  using NumericalError::NumericalError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense real matrix, row-major, value semantics.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols);  // zero-filled
  Mat(int rows, int cols, std::vector<double> entries);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(int n);
  static Mat diag(std::span<const double> d);
  static Mat col_vec(std::span<const double> v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) { return data_[idx(i, j)]; }
  double operator()(int i, int j) const { return data_[idx(i, j)]; }

  double* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row_ptr(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * cols_;
  }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Mat transposed() const;
  Mat block(int r0, int c0, int nrows, int ncols) const;
  void set_block(int r0, int c0, const Mat& b);
  Mat row(int i) const { return block(i, 0, 1, cols_); }
  Mat col(int j) const { return block(0, j, rows_, 1); }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double a);

  double frob_sq() const;
  double frob() const;
  double trace() const;
  double max_abs() const;
  bool is_finite() const;
  /// Max abs difference against another matrix of the same shape.
  double max_abs_diff(const Mat& o) const;

  Mat scaled(double a) const;
  void symmetrize();  // (M + M^T)/2, square only

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double a, Mat m);

/// A^T * B without materializing the transpose.
Mat mul_at_b(const Mat& a, const Mat& b);
/// A * B^T without materializing the transpose.
Mat mul_a_bt(const Mat& a, const Mat& b);

/// Stack blocks vertically / horizontally.
Mat vstack(std::span<const Mat> blocks);
Mat hstack(std::span<const Mat> blocks);

void require(bool cond, const std::string& msg);

}  // namespace sdwsn
