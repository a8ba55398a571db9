#pragma once

#include <functional>
#include <vector>

#include "twinbias/arith.hpp"
#include "twinbias/constants.hpp"

namespace twinbias {

enum class comparator : u8 { strict_less, less_or_equal };

inline const char* comparator_name(comparator c) {
  return c == comparator::less_or_equal ? "le" : "lt";
}

struct density_params {
  u64 q_max = 11;
  comparator cmp = comparator::less_or_equal;
};

// one assignment of the primes in [5, q_max]: a and b are coprime, squarefree,
// with every prime factor in range; weight is prod over q | ab of 1/(q-4)
struct pair_term {
  u128 a = 1;
  u128 b = 1;
  rational weight = 1;
  bool satisfies = false;  // 3*b*phi(a) vs 2*a*phi(b) under the comparator, exact
};

struct density_value {
  u64 q_max = 0;
  comparator cmp = comparator::less_or_equal;
  rational prefactor;  // prod over primes q in [5, q_max] of (q-4)/(q-2)
  rational sum;        // total weight of satisfying pairs
  rational value;      // prefactor * sum
  double value_real = 0.0;
  u64 pair_count = 0;  // 3^k for k usable primes
  u64 satisfying_count = 0;
};

// enumeration cap: largest cutoff the exhaustive pair walk accepts
inline constexpr u64 density_q_cap = 79;

// emit every ternary assignment exactly once, primes ascending, branch order
// (divides neither, divides a, divides b)
void enumerate_pairs(const density_params& params,
                     const std::function<void(const pair_term&)>& emit);

density_value conjecture_value(const density_params& params);

// same accumulation with the comparison dropped; exact result, must equal 1
rational telescoping_check(u64 q_max);

std::vector<density_value> density_trend(const std::vector<u64>& q_list, comparator cmp);

}  // namespace twinbias
