#pragma once
#include "twinbias/arith.hpp"

namespace twinbias {

// Hot-loop primitives with interchangeable implementations.  A variant is a
// table of function pointers; the active table is chosen once at first use
// from CPU capability and can be forced with TWINBIAS_KERNELS=scalar|avx2.
struct kernel_ops {
  const char* name;

  // bit i of words <- (phi[i] == base + i - 1), i in [0, count).  words has
  // ceil(count/64) entries; trailing bits are zeroed.  requires base >= 1.
  void (*prime_mask)(const u64* phi, u64 base, u64 count, u64* words);

  u64 (*popcount)(const u64* words, u64 nwords);

  // sum over the block of log(1 - 1/(p-1)^2); requires every p >= series_min
  double (*products_log_block)(const u32* primes, u64 count);

  // sum over the block of log(1 + 1/(p-1)) / (p - 2); requires every
  // p >= series_min
  double (*tail_log_block)(const u32* primes, u64 count);
};

// blocks passed to the *_log_block kernels must hold primes at or above this;
// the vectorized variants use short series expansions that need the headroom
inline constexpr u32 kernel_series_min = 1025;

const kernel_ops& scalar_kernels();
const kernel_ops* avx2_kernels();    // nullptr when unavailable at build or run time
const kernel_ops& active_kernels();  // honors TWINBIAS_KERNELS, else best available

}  // namespace twinbias
