#pragma once

#include <optional>
#include <vector>

#include "twinbias/arith.hpp"

namespace twinbias {

// twin primes p <= limit with phi(p-1) == phi(p+1), ascending
std::vector<u64> equality_scan(u64 limit, u64 segment_len = u64(1) << 22,
                               unsigned threads = 1);

// primes r <= limit with r+1, 2r+1, 4r+3, 4r+5 all prime; r+1 is even for
// every odd prime, so the list is [2] at every limit >= 2
std::vector<u64> prime_quadruple_scan(u64 limit);

// shifted-totient construction: j and j+k must share their prime-factor set
// and g must equal gcd(j, j+k).  With u = j/g and v = (j+k)/g, if u*r+1 and
// v*r+1 are primes not dividing j, then n = j*(v*r+1) has phi(n) = phi(n+k);
// the equality is re-verified before returning n.  Empty when either prime
// test or divisibility condition fails.
std::optional<u64> totient_shift_construction(u64 j, u64 k, u64 g, u64 r);

}  // namespace twinbias
