#include "twinbias/special.hpp"

#include <numeric>

#include "twinbias/error.hpp"
#include "twinbias/scan.hpp"
#include "twinbias/sieve.hpp"

namespace twinbias {

std::vector<u64> equality_scan(u64 limit, u64 segment_len, unsigned threads) {
  if (limit < 5) raise(errkind::range, "equality_scan: limit must be >= 5");
  std::vector<u64> out;
  scan_options opt;
  opt.segment_len = segment_len;
  opt.threads = threads;
  opt.exceptional_residues.clear();
  opt.on_record = [&](const twin_record& rec) {
    if (rec.equal) out.push_back(rec.p);
  };
  scan(limit, opt);
  return out;
}

std::vector<u64> prime_quadruple_scan(u64 limit) {
  if (limit < 2) raise(errkind::range, "prime_quadruple_scan: limit must be >= 2");
  if (limit > (u64(1) << 32))
    raise(errkind::resource, "prime_quadruple_scan: limit above sieve cap");
  std::vector<u64> out;
  for (u32 rp : primes_up_to(limit)) {
    const u64 r = rp;
    if (!is_prime(r + 1)) continue;  // even beyond r = 2, so this filters all odd r
    if (is_prime(2 * r + 1) && is_prime(4 * r + 3) && is_prime(4 * r + 5)) out.push_back(r);
  }
  return out;
}

std::optional<u64> totient_shift_construction(u64 j, u64 k, u64 g, u64 r) {
  if (j < 2 || k < 1)
    raise(errkind::argument, "totient_shift_construction: need j >= 2 and k >= 1");
  const u64 jk = checked_add(j, k);
  if (std::gcd(j, jk) != g)
    raise(errkind::argument, "totient_shift_construction: g is not gcd(j, j+k)");
  if (!is_prime(r)) raise(errkind::argument, "totient_shift_construction: r must be prime");
  const auto fj = factorize(j);
  const auto fjk = factorize(jk);
  bool same = fj.size() == fjk.size();
  if (same) {
    auto it = fjk.begin();
    for (const auto& [q, e] : fj) {
      if (it->first != q) {
        same = false;
        break;
      }
      ++it;
    }
  }
  if (!same)
    raise(errkind::argument, "totient_shift_construction: j and j+k must share prime factors");
  const u64 p = checked_add(checked_mul(j / g, r), 1);
  const u64 q = checked_add(checked_mul(jk / g, r), 1);
  if (!is_prime(p) || !is_prime(q)) return std::nullopt;
  if (j % p == 0 || j % q == 0) return std::nullopt;
  const u64 n = checked_mul(j, q);
  if (totient_of(n) != totient_of(checked_add(n, k)))
    raise(errkind::arithmetic, "totient_shift_construction: totient equality check failed");
  return n;
}

}  // namespace twinbias
