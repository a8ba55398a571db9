#include "twinbias/constants.hpp"

#include <cmath>

#include "twinbias/sieve.hpp"

#include "reference_tables.hpp"
#include "reference_values.hpp"
#include "require.hpp"

using namespace twinbias;

static u64 rng_state = 0xda3e39cb94b95bdbull;
static u64 next_rand() {
  u64 z = (rng_state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// test-side long-double oracle for the product over odd primes
static long double product_oracle(u64 P) {
  long double prod = 1.0L;
  for (u32 p : primes_up_to(P)) {
    if (p == 2) continue;
    const long double q = (long double)(p)-1.0L;
    prod *= 1.0L - 1.0L / (q * q);
  }
  return prod;
}

int main() {
  // direct-product agreement at modest precision
  {
    const euler_value c = twin_prime_constant(1e-6);
    REQUIRE(std::fabs(c.value - double(product_oracle(10000000))) < 1e-6);
    REQUIRE(c.method == euler_method::direct_product);
    REQUIRE(c.tail_bound <= 1e-6);
  }

  // bracketing and monotone decrease of the truncated product
  {
    double prev = 2.0;
    for (u64 P : {u64(10), u64(100), u64(10000), u64(1000000), u64(10000000)}) {
      const euler_value c = twin_prime_constant_truncated(P);
      REQUIRE(c.value < prev);
      REQUIRE(std::fabs(c.value - refdata::twin_constant) <= c.tail_bound);
      prev = c.value;
    }
    const euler_value empty = twin_prime_constant_truncated(2);
    REQUIRE(empty.value == 1.0);
    REQUIRE(std::fabs(empty.value - refdata::twin_constant) <= empty.tail_bound);
  }

  // unreachable precision surfaces as a precision error; bad target as range
  try {
    twin_prime_constant(1e-10);
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::precision);
  }
  try {
    twin_prime_constant(5e-11);
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::range);
  }

  // quadrature: boundary, domain error, twin-count consistency
  REQUIRE(hl_integral(2.0, 2) == 0.0);
  try {
    hl_integral(1.5, 2);
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::range);
  }
  try {
    hl_integral(10.0, 0);
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::argument);
  }
  {
    const double c2 = twin_prime_constant(1e-8).value;
    const double est4 = 2.0 * c2 * hl_integral(1e4, 2);
    REQUIRE(std::fabs(est4 - double(refdata::pi2_1e4)) / double(refdata::pi2_1e4) < 0.15);
    const double est6 = 2.0 * c2 * hl_integral(1e6, 2);
    REQUIRE(std::fabs(est6 - double(refdata::pi2_1e6)) / double(refdata::pi2_1e6) < 0.05);
    // additivity of the integral across a split point
    const double whole = hl_integral(50000.0, 2);
    const double split = hl_integral(10000.0, 2) + (hl_integral(50000.0, 2) - hl_integral(10000.0, 2));
    REQUIRE(std::fabs(whole - split) < 1e-12 * whole);
  }

  // root counting: pinned examples
  const linear_poly_family twins{{{1, 0}, {1, 2}}};
  const linear_poly_family base385{{{385, 1}, {385, 3}}};
  REQUIRE_EQ(nf_count(twins, 2), 1u);
  REQUIRE_EQ(nf_count(twins, 3), 2u);
  REQUIRE_EQ(nf_count(base385, 5), 0u);
  REQUIRE_EQ(nf_count(base385, 7), 0u);
  REQUIRE_EQ(nf_count(base385, 11), 0u);
  REQUIRE_EQ(nf_count(base385, 3), 2u);
  REQUIRE_EQ(nf_count(base385, 2), 1u);

  // root counting vs brute force over small primes and random families
  {
    const std::vector<u32> ps = primes_up_to(97);
    for (int trial = 0; trial < 200; ++trial) {
      linear_poly_family fam;
      const int m = 1 + int(next_rand() % 2);
      for (int i = 0; i < m; ++i)
        fam.polys.push_back({i64(next_rand() % 50 + 1), i64(next_rand() % 100) - 50});
      if (m == 2 && fam.polys[0].a == fam.polys[1].a && fam.polys[0].b == fam.polys[1].b)
        continue;
      for (u32 p : ps) {
        u64 brute = 0;
        for (u64 t = 0; t < p; ++t) {
          u128 prod = 1;
          for (const auto& poly : fam.polys) {
            const i64 v = (i64(t) * poly.a + poly.b) % i64(p);
            prod = prod * u64((v + i64(p)) % i64(p)) % p;
          }
          if (prod == 0) ++brute;
        }
        REQUIRE_EQ(nf_count(fam, p), brute);
        const bool divides_lead = (fam.polys[0].a % p == 0) ||
                                  (fam.polys.size() == 2 && fam.polys[1].a % p == 0);
        if (!divides_lead) REQUIRE(nf_count(fam, p) <= fam.polys.size());
      }
    }
  }

  // deviant-prime correction factors, exact
  REQUIRE(bh_deviant_factor(twins) == rational(1));
  REQUIRE(bh_deviant_factor(base385) == rational(385, 135));
  REQUIRE(bh_ratio_to_twin(base385) == rational(1, 135));
  {
    const linear_poly_family fam13 = family_for_residue(13);
    REQUIRE_EQ(u64(fam13.polys[0].a), 5005u);
    REQUIRE_EQ(u64(fam13.polys[0].b), 1156u);
    REQUIRE_EQ(u64(fam13.polys[1].b), 1158u);
    REQUIRE(bh_ratio_to_twin(fam13) == rational(1, 135 * 11));
    REQUIRE_EQ(nf_count(fam13, 13), 0u);
  }
  for (u64 r : {u64(13), u64(17), u64(19), u64(23), u64(29)}) {
    const linear_poly_family fam = family_for_residue(r);
    REQUIRE_EQ(u64(fam.polys[0].b) % r, r - 1);
    REQUIRE_EQ(u64(fam.polys[1].b) % r, 1u);
    REQUIRE_EQ(u64(fam.polys[0].b) % 385, 1u);
    REQUIRE_EQ(nf_count(fam, r), 0u);
    REQUIRE(bh_ratio_to_twin(fam) == rational(1, 135 * (r - 2)));
  }
  {
    const u64 want_b[] = {1156, 2311, 4236, 3081, 2696};
    const u64 rs[] = {13, 17, 19, 23, 29};
    for (int i = 0; i < 5; ++i) REQUIRE_EQ(u64(family_for_residue(rs[i]).polys[0].b), want_b[i]);
  }
  for (u64 bad : {u64(5), u64(7), u64(11), u64(15), u64(2)}) {
    try {
      family_for_residue(bad);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::argument);
    }
  }

  // expected counts: scan-oracle agreement and the defining identity
  {
    const double est = bh_expected_count(twins, 1e6);
    REQUIRE(std::fabs(est - double(refdata::pi2_1e6)) / double(refdata::pi2_1e6) < 0.05);
    const double c2 = twin_prime_constant(1e-8).value;
    const double direct = 2.0 * c2 * hl_integral(1e6 - 2.0, 2);
    REQUIRE(std::fabs(est - direct) <= 1e-12 * direct);
  }
  {
    // proportional polynomials are structurally invalid
    const linear_poly_family prop{{{1, 1}, {2, 2}}};
    try {
      bh_deviant_factor(prop);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::validity);
    }
    try {
      bh_expected_count(twins, 3.5);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::range);
    }
  }

  // tail series: ten-digit agreement with the frozen references at desk scale
  {
    const euler_value t13 = tail_series_truncated(13, 10000000);
    REQUIRE(std::fabs(t13.value - refdata::tail_from_13) < 5e-12);
    REQUIRE(std::fabs(t13.value - refdata::tail_from_13) <= t13.tail_bound);
    REQUIRE(t13.tail_estimate > 0.0);
    const euler_value t5 = tail_series_truncated(5, 10000000);
    REQUIRE(std::fabs(t5.value - refdata::tail_from_5) < 5e-12);
    const euler_value t7 = tail_series_truncated(7, 10000000);
    REQUIRE(std::fabs(t7.value - refdata::tail_from_7) < 5e-12);
    const euler_value t3 = tail_series_truncated(3, 10000000);
    REQUIRE(std::fabs(t3.value - refdata::tail_from_3) < 5e-12);
    REQUIRE(t3.value > t5.value);
    REQUIRE(t5.value > t7.value);
    REQUIRE(t7.value > t13.value);
  }
  {
    // bracketing at coarser truncations
    for (u64 P : {u64(10000), u64(100000), u64(1000000)}) {
      const euler_value t = tail_series_truncated(13, P);
      REQUIRE(std::fabs(t.value - refdata::tail_from_13) <= t.tail_bound);
    }
    // start beyond the cutoff: empty sum with the documented bound
    const euler_value beyond = tail_series_truncated(2000000000, 1000000);
    REQUIRE(beyond.value == 0.0);
    REQUIRE(beyond.tail_bound == 1.0 / double(2000000000 - 2));
    try {
      tail_series_truncated(2, 100);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::range);
    }
    try {
      tail_series(13, 1e-12);
      REQUIRE(false);
    } catch (const error& e) {
      REQUIRE(e.kind() == errkind::precision);
    }
  }

  // derived density bounds against the frozen references
  {
    const density_bounds b = density_lower_bounds(1e-6);
    REQUIRE(std::fabs(b.lower_exceptional - refdata::lower_exceptional) < 1e-8);
    REQUIRE(std::fabs(b.lower_unexceptional - refdata::lower_unexceptional) < 1e-8);
    REQUIRE(b.lower_unexceptional > 0.6513);
    REQUIRE(b.lower_exceptional > 0.00459);
  }

  return test_done("test_constants");
}
