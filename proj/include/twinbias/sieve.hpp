#pragma once
#include <utility>
#include <vector>

#include "twinbias/arith.hpp"

namespace twinbias {

// all primes <= n in ascending order; requires 2 <= n <= 2^32
std::vector<u32> primes_up_to(u64 n);

// deterministic Miller-Rabin over a fixed 7-witness set, valid for all u64
bool is_prime(u64 n);

// prime factorization as (prime, exponent) pairs ascending; 1 <= n < 2^63.
// Small primes by trial division, remaining cofactors split with a
// deterministic Brent-cycle rho.
std::vector<std::pair<u64, u32>> factorize(u64 n);

// Euler totient via factorization; 1 <= n < 2^63
u64 totient_of(u64 n);

// Shared base-prime table for segmented totient sweeps over [1, hi).
// Strategy: divide every base prime out of each residue with an exact
// multiply-by-inverse test, accumulate the matching totient factors, then
// credit the surviving cofactor (1 or a single large prime) at the end.
class totient_sieve {
 public:
  explicit totient_sieve(u64 hi);  // 2 <= hi <= 2^63

  // phi(base + i) for i in [0, len); both buffers caller-owned, len elements.
  // requires base >= 1 and base + len <= hi
  void fill(u64 base, u64 len, u64* phi, u64* scratch) const;

  u64 hi() const { return hi_; }

 private:
  u64 hi_;
  std::vector<u32> primes_;  // odd primes <= sqrt(hi - 1)
  std::vector<u64> inv_;     // p^-1 mod 2^64
  std::vector<u64> lim_;     // floor(2^64 - 1) / p
};

// phi(lo + i) for i in [0, hi - lo); requires 1 <= lo < hi <= 2^63
std::vector<u64> totient_range(u64 lo, u64 hi, u64 segment_len = u64(1) << 22);

inline u64 isqrt_u64(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(__builtin_sqrt(static_cast<double>(n)));
  while (r > 0 && u128(r) * r > n) --r;
  while (u128(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace twinbias
