#pragma once

#include <cstddef>

// Low-level array kernels behind the dense linear algebra layer.
//
// Every kernel exists as a scalar reference implementation and, where the
// build and the host CPU allow it, an AVX2+FMA variant.  The active variant
// is chosen once at startup (cpuid probe, overridable with the environment
// variable SDWSN_KERNELS=scalar|avx2) and the two are required to agree to
// floating-point roundoff; tests/test_kernels.cpp enforces that.

namespace sdwsn::kernels {

struct Ops {
  // sum_i x[i]*y[i]
  double (*dot)(std::size_t n, const double* x, const double* y);
  // y[i] += a*x[i]
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  // x[i] *= a
  void (*scal)(std::size_t n, double a, double* x);
  // out[i] = x[i]*x[i]
  void (*square)(std::size_t n, const double* x, double* out);
  // plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
  void (*rot)(std::size_t n, double* x, double* y, double c, double s);
  // sum_i x[i]*x[i]
  double (*nrm2sq)(std::size_t n, const double* x);
  const char* name;
};

extern const Ops scalar_ops;
#if defined(SDWSN_HAVE_AVX2)
extern const Ops avx2_ops;
#endif

// Active kernel set (resolved on first call).
const Ops& active();

// Test hook: force a specific backend by name ("scalar", "avx2", "auto").
// Returns false if the backend is unavailable on this machine.
bool force_backend(const char* name);

// Name of the backend currently in use.
const char* backend_name();

inline double dot(std::size_t n, const double* x, const double* y) {
  return active().dot(n, x, y);
}
inline void axpy(std::size_t n, double a, const double* x, double* y) {
  active().axpy(n, a, x, y);
}
inline void scal(std::size_t n, double a, double* x) { active().scal(n, a, x); }
inline void square(std::size_t n, const double* x, double* out) {
  active().square(n, x, out);
}
inline void rot(std::size_t n, double* x, double* y, double c, double s) {
  active().rot(n, x, y, c, s);
}
inline double nrm2sq(std::size_t n, const double* x) {
  return active().nrm2sq(n, x);
}

}  // namespace sdwsn::kernels
