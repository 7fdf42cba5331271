#include "sdwsn/kernels.hpp"

namespace sdwsn::kernels {
namespace {

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 += x[i] * y[i];
    acc1 += x[i + 1] * y[i + 1];
    acc2 += x[i + 2] * y[i + 2];
    acc3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) acc0 += x[i] * y[i];
  return (acc0 + acc1) + (acc2 + acc3);
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void square_scalar(std::size_t n, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void rot_scalar(std::size_t n, double* x, double* y, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double nrm2sq_scalar(std::size_t n, const double* x) {
  return dot_scalar(n, x, x);
}

}  // namespace

const Ops scalar_ops = {dot_scalar,   axpy_scalar, scal_scalar,
                        square_scalar, rot_scalar,  nrm2sq_scalar,
                        "scalar"};

}  // namespace sdwsn::kernels
