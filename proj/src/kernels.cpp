#include "twinbias/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace twinbias {

namespace detail {
const kernel_ops* avx2_kernel_table();
}

const kernel_ops* avx2_kernels() {
#if defined(TWINBIAS_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2")) return detail::avx2_kernel_table();
#endif
  return nullptr;
}

const kernel_ops& active_kernels() {
  static const kernel_ops& chosen = []() -> const kernel_ops& {
    if (const char* env = std::getenv("TWINBIAS_KERNELS")) {
      if (!std::strcmp(env, "scalar")) return scalar_kernels();
      if (!std::strcmp(env, "avx2")) {
        if (const kernel_ops* k = avx2_kernels()) return *k;
        raise(errkind::argument, "TWINBIAS_KERNELS=avx2 but AVX2 is unavailable");
      }
      raise(errkind::argument, std::string("TWINBIAS_KERNELS: unknown variant '") + env + "'");
    }
    if (const kernel_ops* k = avx2_kernels()) return *k;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace twinbias
