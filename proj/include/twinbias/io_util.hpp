#pragma once
#include <cstddef>
#include <optional>
#include <string>

#include "twinbias/arith.hpp"

namespace twinbias {

// FNV-1a 64-bit rolling hash; feed chunks in order with the previous result
inline constexpr u64 fnv_offset = 0xcbf29ce484222325ull;
inline u64 fnv1a(const void* data, std::size_t n, u64 h = fnv_offset) {
  const unsigned char* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_hex16(u64 v);
u64 from_hex16(const std::string& s);  // argument error on malformed input

// Integer CLI argument: plain decimal, digit-grouping underscores, or
// scientific/decimal notation that denotes an exact integer below 2^63.
u64 parse_u64_arg(const std::string& raw);
// same, with the argument name prefixed to any parse error
u64 parse_u64_arg(const std::string& raw, const char* name);

// environment variable as integer; empty/missing -> nullopt
std::optional<u64> env_u64(const char* name);

}  // namespace twinbias
