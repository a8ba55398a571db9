// Acceptance suite: the coprime-density pair expansion.
//   criterion 08  the unpruned expansion telescopes to exactly 1 for cutoffs
//                 {3, 5, 11, 31, 53}; the cutoff-11 value is exactly 1/135;
//                 pair counts equal 3^k for k usable primes; < 60 s
#include <sstream>
#include <string>

#include "acceptance_util.hpp"
#include "twinbias/density.hpp"

using namespace twinbias;
using acceptance::fmt;

namespace {

constexpr double budget_density_s = 60.0;

std::string rat_str(const rational& r) {
  std::ostringstream ss;
  ss << r;
  return ss.str();
}

u64 pow3(unsigned k) {
  u64 v = 1;
  while (k--) v *= 3;
  return v;
}

unsigned usable_prime_count(u64 q_max) {
  static constexpr u64 primes[] = {5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                   41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
  unsigned k = 0;
  for (u64 q : primes)
    if (q <= q_max) ++k;
  return k;
}

}  // namespace

int main() {
  acceptance::reporter rep;
  acceptance::stopwatch sw;

  {
    bool ok = true;
    std::string detail;
    for (u64 q : {3, 5, 11, 31, 53}) {
      const rational total = telescoping_check(q);
      if (total != rational(1)) ok = false;
      detail += fmt("%sQ=%llu:%s", detail.empty() ? "" : " ", (unsigned long long)q,
                    rat_str(total).c_str());
    }
    rep.line("criterion 08a unpruned expansion telescopes to 1", ok, detail);
  }

  {
    const density_value v = conjecture_value({11, comparator::less_or_equal});
    const bool ok = v.value == rational(1, 135) && v.pair_count == 27;
    rep.line("criterion 08b cutoff-11 value exactly 1/135", ok,
             fmt("value=%s pairs=%llu satisfying=%llu", rat_str(v.value).c_str(),
                 (unsigned long long)v.pair_count, (unsigned long long)v.satisfying_count));
  }

  {
    bool ok = true;
    std::string detail;
    for (u64 q : {3, 5, 11, 31}) {  // stream-counted
      u64 streamed = 0;
      enumerate_pairs({q, comparator::less_or_equal},
                      [&](const pair_term&) { ++streamed; });
      const u64 want = pow3(usable_prime_count(q));
      if (streamed != want) ok = false;
      detail += fmt("%sQ=%llu:%llu/%llu", detail.empty() ? "" : " ", (unsigned long long)q,
                    (unsigned long long)streamed, (unsigned long long)want);
    }
    const density_value v53 = conjecture_value({53, comparator::less_or_equal});
    const u64 want53 = pow3(usable_prime_count(53));
    if (v53.pair_count != want53) ok = false;
    detail += fmt(" Q=53:%llu/%llu", (unsigned long long)v53.pair_count,
                  (unsigned long long)want53);
    rep.line("criterion 08c pair counts equal 3^k", ok, detail);
  }

  {
    const double el = sw.seconds();
    rep.line("criterion 08d density runtime", el < budget_density_s,
             fmt("%.2f s (budget %.0f s)", el, budget_density_s));
  }

  return rep.finish("acceptance_density");
}
