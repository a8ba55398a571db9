#include "twinbias/density.hpp"

#include <numeric>
#include <sstream>
#include <vector>

#include "density_pairs_q11.hpp"
#include "require.hpp"

using namespace twinbias;

static std::vector<pair_term> collect(u64 q_max, comparator cmp) {
  std::vector<pair_term> out;
  enumerate_pairs({q_max, cmp}, [&](const pair_term& t) { out.push_back(t); });
  return out;
}

static std::string rat_str(const rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// test-side factorization oracle for small squarefree values
static u64 phi_oracle(u64 n) {
  u64 phi = 1;
  for (u64 q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      phi *= q - 1;
      n /= q;
    }
  if (n > 1) phi *= n - 1;
  return phi;
}

int main() {
  // stream against the frozen 27-row table, in emission order
  {
    const std::vector<pair_term> got = collect(11, comparator::less_or_equal);
    REQUIRE_EQ(got.size(), 27u);
    for (size_t i = 0; i < got.size(); ++i) {
      REQUIRE_EQ(u64(got[i].a), refdata::density_pairs_q11[i].a);
      REQUIRE_EQ(u64(got[i].b), refdata::density_pairs_q11[i].b);
      REQUIRE(rat_str(got[i].weight) == refdata::density_pairs_q11[i].weight);
      REQUIRE(got[i].satisfies == refdata::density_pairs_q11[i].sat_le);
    }
    const std::vector<pair_term> strict = collect(11, comparator::strict_less);
    for (size_t i = 0; i < strict.size(); ++i)
      REQUIRE(strict[i].satisfies == refdata::density_pairs_q11[i].sat_lt);
  }

  // structural invariants plus a direct rational-comparison oracle at Q=13
  for (comparator cmp : {comparator::less_or_equal, comparator::strict_less}) {
    const std::vector<pair_term> terms = collect(13, cmp);
    REQUIRE_EQ(terms.size(), 81u);
    for (const pair_term& t : terms) {
      const u64 a = u64(t.a), b = u64(t.b);
      REQUIRE_EQ(std::gcd(a, b), 1u);
      for (u64 q : {u64(5), u64(7), u64(11), u64(13)}) REQUIRE(a * b % (q * q) != 0);
      const rational lhs = rational(phi_oracle(a), 2 * a);
      const rational rhs = rational(phi_oracle(b), 3 * b);
      const bool want = cmp == comparator::less_or_equal ? lhs <= rhs : lhs < rhs;
      REQUIRE(t.satisfies == want);
    }
  }

  // pinned aggregate values
  {
    const density_value v = conjecture_value({11, comparator::less_or_equal});
    REQUIRE(v.value == rational(1, 135));
    REQUIRE(v.prefactor == rational(7, 45));
    REQUIRE(v.sum == rational(1, 21));
    REQUIRE_EQ(v.pair_count, 27u);
    REQUIRE_EQ(v.satisfying_count, 1u);
    REQUIRE(v.value_real > 0.0074 && v.value_real < 0.0075);
  }
  for (comparator cmp : {comparator::less_or_equal, comparator::strict_less}) {
    REQUIRE(conjecture_value({5, cmp}).value == rational(0));
    REQUIRE(conjecture_value({3, cmp}).value == rational(0));
    REQUIRE_EQ(conjecture_value({3, cmp}).pair_count, 1u);
    REQUIRE_EQ(conjecture_value({5, cmp}).pair_count, 3u);
  }

  // conjecture_value agrees with a plain accumulation over the stream
  for (u64 q_max : {u64(3), u64(7), u64(13), u64(17), u64(19), u64(23)}) {
    for (comparator cmp : {comparator::less_or_equal, comparator::strict_less}) {
      const density_value v = conjecture_value({q_max, cmp});
      rational acc = 0;
      u64 n = 0, sat = 0;
      enumerate_pairs({q_max, cmp}, [&](const pair_term& t) {
        ++n;
        if (t.satisfies) {
          acc += t.weight;
          ++sat;
        }
      });
      REQUIRE_EQ(n, v.pair_count);
      REQUIRE_EQ(sat, v.satisfying_count);
      REQUIRE(acc == v.sum);
      REQUIRE(v.value == v.prefactor * acc);
      // reversed-order accumulation gives the same exact sum
      std::vector<rational> ws;
      enumerate_pairs({q_max, cmp}, [&](const pair_term& t) {
        if (t.satisfies) ws.push_back(t.weight);
      });
      rational rev = 0;
      for (size_t i = ws.size(); i-- > 0;) rev += ws[i];
      REQUIRE(rev == acc);
    }
  }

  // the <= satisfying set contains the < one
  for (u64 q_max : {u64(3), u64(11), u64(17), u64(23), u64(29)}) {
    const density_value le = conjecture_value({q_max, comparator::less_or_equal});
    const density_value lt = conjecture_value({q_max, comparator::strict_less});
    REQUIRE(le.value >= lt.value);
    REQUIRE(le.satisfying_count >= lt.satisfying_count);
  }

  // unconditioned accumulation collapses to exactly 1
  for (u64 q_max : {u64(3), u64(5), u64(11), u64(31), u64(43), u64(47)})
    REQUIRE(telescoping_check(q_max) == rational(1));

  // trend table
  {
    const std::vector<density_value> t =
        density_trend({3, 5, 11}, comparator::less_or_equal);
    REQUIRE_EQ(t.size(), 3u);
    REQUIRE(t[0].value == rational(0));
    REQUIRE(t[1].value == rational(0));
    REQUIRE(t[2].value == rational(1, 135));
    REQUIRE_EQ(t[2].q_max, 11u);
  }

  // domain errors
  try {
    conjecture_value({2, comparator::less_or_equal});
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::range);
  }
  try {
    conjecture_value({83, comparator::less_or_equal});
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::resource);
  }
  try {
    telescoping_check(97);
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::resource);
  }
  try {
    enumerate_pairs({80, comparator::strict_less}, [](const pair_term&) {});
    REQUIRE(false);
  } catch (const error& e) {
    REQUIRE(e.kind() == errkind::resource);
  }

  // larger cutoffs stay exact and consistent between comparators
  {
    const density_value v = conjecture_value({31, comparator::less_or_equal});
    REQUIRE_EQ(v.pair_count, 19683u);
    REQUIRE(v.value > rational(0));
    REQUIRE(v.satisfying_count > 0u);
    rational acc = 0;
    enumerate_pairs({31, comparator::less_or_equal}, [&](const pair_term& t) {
      if (t.satisfies) acc += t.weight;
    });
    REQUIRE(acc == v.sum);
  }

  return test_done("test_density");
}
