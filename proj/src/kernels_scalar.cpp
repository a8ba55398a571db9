#include <cmath>

#include "twinbias/kernels.hpp"

namespace twinbias {
namespace {

void prime_mask_scalar(const u64* phi, u64 base, u64 count, u64* words) {
  const u64 nwords = (count + 63) >> 6;
  for (u64 w = 0; w < nwords; ++w) words[w] = 0;
  for (u64 i = 0; i < count; ++i)
    if (phi[i] == base + i - 1) words[i >> 6] |= u64(1) << (i & 63);
}

u64 popcount_scalar(const u64* words, u64 nwords) {
  u64 s = 0;
  for (u64 i = 0; i < nwords; ++i) s += u64(__builtin_popcountll(words[i]));
  return s;
}

double products_log_scalar(const u32* primes, u64 count) {
  double s = 0.0;
  for (u64 i = 0; i < count; ++i) {
    const double q = double(primes[i]) - 1.0;
    s += std::log1p(-1.0 / (q * q));
  }
  return s;
}

double tail_log_scalar(const u32* primes, u64 count) {
  double s = 0.0;
  for (u64 i = 0; i < count; ++i) {
    const double p = double(primes[i]);
    s += std::log1p(1.0 / (p - 1.0)) / (p - 2.0);
  }
  return s;
}

constexpr kernel_ops scalar_table = {
    "scalar", prime_mask_scalar, popcount_scalar, products_log_scalar, tail_log_scalar,
};

}  // namespace

const kernel_ops& scalar_kernels() { return scalar_table; }

}  // namespace twinbias
