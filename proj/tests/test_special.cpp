#include "twinbias/special.hpp"

#include <numeric>
#include <vector>

#include "twinbias/scan.hpp"

#include "reference_tables.hpp"
#include "require.hpp"

using namespace twinbias;

// trial-division oracles, independent of the library factorizer
static u64 phi_oracle(u64 n) {
  u64 phi = n;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      phi -= phi / q;
      while (n % q == 0) n /= q;
    }
  if (n > 1) phi -= phi / n;
  return phi;
}

static bool prime_oracle(u64 n) {
  if (n < 2) return false;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

static u64 radical_oracle(u64 n) {
  u64 rad = 1;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      rad *= q;
      while (n % q == 0) n /= q;
    }
  return n > 1 ? rad * n : rad;
}

int main() {
  // pinned lists at the two desk-scale limits, plus the boundary
  {
    const std::vector<u64> got4 = equality_scan(10000);
    const std::vector<u64> want4 = {5, 11, 71, 2591};
    REQUIRE(got4 == want4);
    const std::vector<u64> got6 = equality_scan(1000000);
    const std::vector<u64> want6 = {5, 11, 71, 2591, 208391};
    REQUIRE(got6 == want6);
    for (size_t i = 0; i < got6.size(); ++i) REQUIRE_EQ(got6[i], refdata::equality_primes[i]);
    const std::vector<u64> boundary = equality_scan(5);
    REQUIRE_EQ(boundary.size(), 1u);
    REQUIRE_EQ(boundary[0], 5u);
    try {
      equality_scan(4);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::range);
    }
  }

  // each record independently re-verified
  for (u64 p : equality_scan(1000000)) {
    REQUIRE(prime_oracle(p));
    REQUIRE(prime_oracle(p + 2));
    REQUIRE_EQ(phi_oracle(p - 1), phi_oracle(p + 1));
  }

  // agreement with the scan's equal flag, and independence from scan geometry
  {
    std::vector<u64> flagged;
    scan_options opt;
    opt.on_record = [&](const twin_record& rec) {
      if (rec.equal) flagged.push_back(rec.p);
    };
    scan(200000, opt);
    const std::vector<u64> direct = equality_scan(200000);
    REQUIRE(direct == flagged);
    REQUIRE(equality_scan(1000000, u64(1) << 16, 3) == equality_scan(1000000));
  }

  // equality records thin out relative to twin pairs across the checkpoints
  {
    const u64 c4 = equality_scan(10000).size();
    const u64 c6 = equality_scan(1000000).size();
    REQUIRE_EQ(c4, 4u);
    REQUIRE_EQ(c6, 5u);
    REQUIRE(c4 * refdata::pi2_1e6 > c6 * refdata::pi2_1e4);
  }

  // the quadruple pattern admits only r = 2 at any limit
  {
    const std::vector<u64> want = {2};
    REQUIRE(prime_quadruple_scan(2) == want);
    REQUIRE(prime_quadruple_scan(10) == want);
    REQUIRE(prime_quadruple_scan(1000000) == want);
    try {
      prime_quadruple_scan(1);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::range);
    }
    try {
      prime_quadruple_scan(u64(1) << 33);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::resource);
    }
  }

  // shifted-totient construction: pinned positives
  {
    const std::optional<u64> n1 = totient_shift_construction(2, 2, 2, 2);
    REQUIRE(n1.has_value() && *n1 == 10);
    REQUIRE_EQ(phi_oracle(10), phi_oracle(12));
    const std::optional<u64> n2 = totient_shift_construction(4, 4, 4, 2);
    REQUIRE(n2.has_value() && *n2 == 20);
    const std::optional<u64> n3 = totient_shift_construction(12, 6, 6, 2);
    REQUIRE(n3.has_value() && *n3 == 84);
    REQUIRE_EQ(phi_oracle(84), phi_oracle(90));
  }

  // pinned negatives: a failed prime test or a divisibility hit gives empty
  REQUIRE(!totient_shift_construction(2, 2, 2, 3).has_value());
  REQUIRE(!totient_shift_construction(6, 6, 6, 5).has_value());
  REQUIRE(!totient_shift_construction(6, 6, 6, 2).has_value());

  // precondition violations
  try {
    totient_shift_construction(2, 3, 1, 2);  // radicals {2} vs {5}
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::argument);
  }
  try {
    totient_shift_construction(2, 2, 1, 2);  // g != gcd
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::argument);
  }
  try {
    totient_shift_construction(2, 2, 2, 4);  // r composite
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::argument);
  }

  // sweep: wherever the construction fires it must produce a verified witness
  {
    u64 fired = 0;
    for (u64 j = 2; j <= 200; ++j)
      for (u64 k = 1; k <= 200; ++k) {
        if (radical_oracle(j) != radical_oracle(j + k)) continue;
        const u64 g = std::gcd(j, j + k);
        for (u64 r : {u64(2), u64(3), u64(5), u64(7), u64(13)}) {
          const std::optional<u64> n = totient_shift_construction(j, k, g, r);
          if (!n.has_value()) continue;
          ++fired;
          REQUIRE(*n % j == 0);
          REQUIRE_EQ(phi_oracle(*n), phi_oracle(*n + k));
        }
      }
    REQUIRE(fired >= 10);
  }

  return test_done("test_special");
}
