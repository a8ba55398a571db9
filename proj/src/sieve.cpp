#include "twinbias/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace twinbias {

std::vector<u32> primes_up_to(u64 n) {
  if (n < 2) raise(errkind::range, "primes_up_to: n must be >= 2");
  if (n > (u64(1) << 32)) raise(errkind::range, "primes_up_to: n must be <= 2^32");
  const u64 half = (n - 1) / 2;  // index i <-> odd value 2i + 1, i in [1, half]
  std::vector<u64> composite((half >> 6) + 1, 0);
  const auto test = [&](u64 i) { return (composite[i >> 6] >> (i & 63)) & 1; };
  const u64 s = isqrt_u64(n);
  for (u64 i = 1; 2 * i + 1 <= s; ++i) {
    if (test(i)) continue;
    const u64 p = 2 * i + 1;
    for (u64 j = 2 * i * (i + 1); j <= half; j += p) composite[j >> 6] |= u64(1) << (j & 63);
  }
  std::vector<u32> out;
  out.reserve(half < 64 ? 16 : static_cast<size_t>(double(n) / (std::log(double(n)) - 1.1)));
  out.push_back(2);
  for (u64 i = 1; i <= half; ++i)
    if (!test(i)) out.push_back(static_cast<u32>(2 * i + 1));
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = __builtin_ctzll(d);
  d >>= s;
  for (u64 a : {2, 325, 9375, 28178, 450775, 9780504, 1795265022}) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

u64 rho_step(u64 x, u64 c, u64 n) { return u64((u128(x) * x + c) % n); }

// deterministic Brent-cycle rho; n odd composite, returns a non-trivial factor
u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 batch = 128;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = rho_step(y, c, n);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        const u64 lim = std::min(batch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = rho_step(y, c, n);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = rho_step(ys, c, n);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

const std::vector<u32>& small_primes() {
  static const std::vector<u32> table = primes_up_to(1024);
  return table;
}

}  // namespace

std::vector<std::pair<u64, u32>> factorize(u64 n) {
  if (n < 1 || n >= (u64(1) << 63)) raise(errkind::range, "factorize: need 1 <= n < 2^63");
  std::map<u64, u32> acc;
  for (u32 p : small_primes()) {
    if (u64(p) * p > n) break;
    while (n % p == 0) {
      ++acc[p];
      n /= p;
    }
  }
  std::vector<u64> pending;
  if (n > 1) pending.push_back(n);
  while (!pending.empty()) {
    u64 m = pending.back();
    pending.pop_back();
    if (m == 1) continue;
    if (m < u64(small_primes().back()) * small_primes().back() || is_prime(m)) {
      ++acc[m];
      continue;
    }
    u64 d = pollard_brent(m);
    pending.push_back(d);
    pending.push_back(m / d);
  }
  return {acc.begin(), acc.end()};
}

u64 totient_of(u64 n) {
  u64 phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

totient_sieve::totient_sieve(u64 hi) : hi_(hi) {
  if (hi < 2 || hi > (u64(1) << 63)) raise(errkind::range, "totient_sieve: need 2 <= hi <= 2^63");
  const u64 s = isqrt_u64(hi - 1);
  if (s >= 3) {
    for (u32 p : primes_up_to(s)) {
      if (p == 2) continue;
      primes_.push_back(p);
      inv_.push_back(inverse_pow2(p));
      lim_.push_back(~u64(0) / p);
    }
  }
}

void totient_sieve::fill(u64 base, u64 len, u64* phi, u64* scratch) const {
  if (base < 1 || len == 0 || base + len > hi_ || base + len < base)
    raise(errkind::range, "totient_sieve::fill: window outside [1, hi)");
  u64* rem = scratch;
  for (u64 i = 0; i < len; ++i) {
    u64 n = base + i;
    if (n & 1) {
      rem[i] = n;
      phi[i] = 1;
    } else {
      const int tz = __builtin_ctzll(n);
      rem[i] = n >> tz;
      phi[i] = u64(1) << (tz - 1);
    }
  }
  const u64 end = base + len;
  for (size_t k = 0; k < primes_.size(); ++k) {
    const u64 p = primes_[k], inv = inv_[k], lim = lim_[k];
    for (u64 m = ((base + p - 1) / p) * p; m < end; m += p) {
      const u64 i = m - base;
      u64 r = rem[i] * inv;  // exact by construction: p divides rem[i]
      u64 f = p - 1;
      for (u64 q = r * inv; q <= lim; q = r * inv) {
        r = q;
        f *= p;
      }
      phi[i] *= f;
      rem[i] = r;
    }
  }
  for (u64 i = 0; i < len; ++i)
    if (rem[i] > 1) phi[i] *= rem[i] - 1;  // lone prime cofactor above sqrt(hi-1)
}

std::vector<u64> totient_range(u64 lo, u64 hi, u64 segment_len) {
  if (lo < 1 || lo >= hi) raise(errkind::range, "totient_range: need 1 <= lo < hi");
  if (segment_len == 0) raise(errkind::argument, "totient_range: segment_len must be positive");
  totient_sieve sieve(hi);
  std::vector<u64> out(hi - lo);
  std::vector<u64> scratch(std::min(segment_len, hi - lo));
  for (u64 base = lo; base < hi; base += segment_len) {
    const u64 len = std::min(segment_len, hi - base);
    sieve.fill(base, len, out.data() + (base - lo), scratch.data());
  }
  return out;
}

}  // namespace twinbias
