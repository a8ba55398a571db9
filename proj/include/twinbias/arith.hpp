#pragma once
#include <cstdint>

#include "twinbias/error.hpp"

namespace twinbias {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) raise(errkind::arithmetic, "u64 add overflow");
  return r;
}

inline u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) raise(errkind::arithmetic, "u64 mul overflow");
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// inverse of odd n modulo 2^64 (Newton iteration, 5 steps from a 5-bit seed)
inline u64 inverse_pow2(u64 n) {
  u64 x = n;  // correct to 3 bits
  for (int i = 0; i < 5; ++i) x *= 2 - n * x;
  return x;
}

// inverse of a modulo m for gcd(a, m) == 1; extended Euclid on signed 128-bit
inline u64 inverse_mod(u64 a, u64 m) {
  using i128 = __int128;
  i128 t = 0, newt = 1, r = m, newr = a % m;
  while (newr != 0) {
    i128 q = r / newr;
    i128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) raise(errkind::argument, "inverse_mod: arguments not coprime");
  if (t < 0) t += m;
  return u64(t);
}

}  // namespace twinbias
