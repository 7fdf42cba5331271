#include "sdwsn/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace sdwsn::kernels {
namespace {

const Ops* resolve_auto() {
#if defined(SDWSN_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &avx2_ops;
  }
#endif
  return &scalar_ops;
}

const Ops* resolve_named(const char* name) {
  if (std::strcmp(name, "scalar") == 0) return &scalar_ops;
#if defined(SDWSN_HAVE_AVX2)
  if (std::strcmp(name, "avx2") == 0) {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
      return &avx2_ops;
    }
    return nullptr;
  }
#endif
  if (std::strcmp(name, "auto") == 0) return resolve_auto();
  return nullptr;
}

const Ops* initial_backend() {
  if (const char* env = std::getenv("SDWSN_KERNELS")) {
    if (const Ops* ops = resolve_named(env)) return ops;
  }
  return resolve_auto();
}

const Ops*& current() {
  static const Ops* ops = initial_backend();
  return ops;
}

}  // namespace

const Ops& active() { return *current(); }

bool force_backend(const char* name) {
  const Ops* ops = resolve_named(name);
  if (!ops) return false;
  current() = ops;
  return true;
}

const char* backend_name() { return active().name; }

}  // namespace sdwsn::kernels
