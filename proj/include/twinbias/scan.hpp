#pragma once
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "twinbias/arith.hpp"

namespace twinbias {

enum class twin_class : u8 { unexceptional, exceptional };

// one twin pair (p, p+2); delta = phi(p-1) - phi(p+1)
struct twin_record {
  u64 p, phi_minus, phi_plus;
  i64 delta;
  twin_class cls;
  bool equal;
};

struct scan_counters {
  u64 limit = 0;
  u64 pi2 = 0;   // twin pairs counted (pairs from (5,7) upward; (3,5) excluded)
  u64 pie = 0;   // exceptional: phi(p-1) < phi(p+1)
  u64 piu = 0;   // unexceptional
  u64 pieq = 0;  // delta == 0 (subset of unexceptional)
  // (modulus, residue) -> hits; the first map counts exceptional records only,
  // the second counts every twin record
  std::map<std::pair<u64, u64>, u64> residue_hits;
  std::map<std::pair<u64, u64>, u64> twin_residue_hits;

  // fold in counters from a disjoint range; pure addition, limit keeps the max
  void merge(const scan_counters& other);
};

struct scan_options {
  u64 segment_len = u64(1) << 22;  // >= 2^16
  unsigned threads = 1;
  u64 start = 5;  // first candidate examined; raised by resume
  // residue classes tallied while scanning
  std::vector<std::pair<u64, u64>> exceptional_residues = {{770, 1}};
  std::vector<std::pair<u64, u64>> twin_residues;
  scan_counters seed;  // counters already accumulated for [5, start)
  std::function<void(const twin_record&)> on_record;          // ascending p
  std::function<void(u64, const scan_counters&)> on_segment;  // (scanned_up_to, running totals)
};

// Enumerate twin primes p in [options.start, limit] in ascending order.
// Segments are processed independently (optionally in parallel) and released
// in order, so the record stream does not depend on segment length or thread
// count.
scan_counters scan(u64 limit, const scan_options& options = {});

twin_class classify(u64 p, u64 phi_minus, u64 phi_plus);

// exact biconditional [phi(p-1) >= phi(p+1)] <=> [phi(p-1)/(p-1) >= phi(p+1)/(p+1)]
// via integer cross-multiplication; p and p+2 must be prime, p >= 5
bool density_order_matches(u64 p, u64 phi_minus, u64 phi_plus);
bool density_order_matches(u64 p);

// exact rational comparison
//   (1/2) prod_{q | p-1, q >= 5} (1 - 1/q)  <  (1/3) prod_{q | p+1, q >= 5} (1 - 1/q)
// for a twin prime p >= 5; equals (classify == exceptional) for every twin pair
bool coprime_density_condition(u64 p);

// sum of log(1 + 1/(r-1)) over prime divisors r of n with r >= threshold
double prime_divisor_log_sum(u64 n, u64 threshold);

struct ratio_row {
  u64 k, p, pie, pi2;  // k-th exceptional prime p with running counters at p
};
void ratio_series(u64 limit, const scan_options& base,
                  const std::function<void(const ratio_row&)>& fn);

// count of exceptional p <= limit (or among the first k exceptional) with
// p congruent to residue mod modulus
u64 residue_count_limit(u64 limit, u64 modulus, u64 residue, const scan_options& base = {});
u64 residue_count_first_k(u64 k, u64 modulus, u64 residue, const scan_options& base = {});

// running-ratio column format used by the ratio tables: six significant digits
std::string format_ratio(u64 pie, u64 pi2);

}  // namespace twinbias
