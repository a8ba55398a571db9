#include "twinbias/density.hpp"

#include "twinbias/error.hpp"
#include "twinbias/sieve.hpp"

namespace twinbias {

namespace {

std::vector<u64> usable_primes(u64 q_max) {
  if (q_max < 3) raise(errkind::range, "density: q_max must be >= 3");
  if (q_max > density_q_cap) raise(errkind::resource, "density: q_max above enumeration cap");
  std::vector<u64> qs;
  for (u32 p : primes_up_to(q_max))
    if (p >= 5) qs.push_back(p);
  return qs;
}

u64 pow3(size_t k) {
  u64 r = 1;
  while (k--) r *= 3;
  return r;
}

// sign of x1*y1 - x2*y2 with 256-bit intermediates
int cmp_prod(u128 x1, u128 y1, u128 x2, u128 y2) {
  const auto mul = [](u128 x, u128 y, u128& hi, u128& lo) {
    const u128 mask = (u128(1) << 64) - 1;
    const u128 xl = x & mask, xh = x >> 64, yl = y & mask, yh = y >> 64;
    const u128 ll = xl * yl, lh = xl * yh, hl = xh * yl, hh = xh * yh;
    const u128 mid = (ll >> 64) + (lh & mask) + (hl & mask);
    lo = (mid << 64) | (ll & mask);
    hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
  };
  u128 ahi, alo, bhi, blo;
  mul(x1, y1, ahi, alo);
  mul(x2, y2, bhi, blo);
  if (ahi != bhi) return ahi < bhi ? -1 : 1;
  if (alo != blo) return alo < blo ? -1 : 1;
  return 0;
}

bool cmp_holds(int sign, comparator c) {
  return c == comparator::less_or_equal ? sign <= 0 : sign < 0;
}

rational to_rational(u128 v) {
  boost::multiprecision::cpp_int n = u64(v >> 64);
  n <<= 64;
  n += u64(v);
  return rational(n);
}

struct prune_ctx {
  const std::vector<u64>& qs;
  comparator cmp;
  // suffix products over primes from index i on: of q, of q-1, and of the
  // unconditioned weight mass (q-2)/(q-4)
  std::vector<u128> suf_q, suf_q1;
  std::vector<rational> suf_mass;
  rational sum = 0;
  u64 satisfying = 0;
};

// l = 3*b*phi(a), r = 2*a*phi(b) along the partial assignment; wden is the
// weight denominator prod over q | ab of (q-4).  The extreme completions
// (all remaining primes to b, all to a) bound every leaf of the subtree, so a
// subtree is cut as soon as its satisfying status is uniform.
void prune_walk(prune_ctx& c, size_t idx, u128 l, u128 r, u128 wden) {
  if (cmp_holds(cmp_prod(l, c.suf_q[idx], r, c.suf_q1[idx]), c.cmp)) {
    c.sum += c.suf_mass[idx] / to_rational(wden);
    c.satisfying += pow3(c.qs.size() - idx);
    return;
  }
  if (!cmp_holds(cmp_prod(l, c.suf_q1[idx], r, c.suf_q[idx]), c.cmp)) return;
  const u64 q = c.qs[idx];
  prune_walk(c, idx + 1, l, r, wden);
  prune_walk(c, idx + 1, l * (q - 1), r * q, wden * (q - 4));
  prune_walk(c, idx + 1, l * q, r * (q - 1), wden * (q - 4));
}

void enum_walk(const std::vector<u64>& qs, comparator cmp, size_t idx, u128 a, u128 b,
               const rational& weight, u128 l, u128 r,
               const std::function<void(const pair_term&)>& emit) {
  if (idx == qs.size()) {
    pair_term t;
    t.a = a;
    t.b = b;
    t.weight = weight;
    t.satisfies = cmp_holds(l < r ? -1 : (l > r ? 1 : 0), cmp);
    emit(t);
    return;
  }
  const u64 q = qs[idx];
  const rational w = weight / (q - 4);
  enum_walk(qs, cmp, idx + 1, a, b, weight, l, r, emit);
  enum_walk(qs, cmp, idx + 1, a * q, b, w, l * (q - 1), r * q, emit);
  enum_walk(qs, cmp, idx + 1, a, b * q, w, l * q, r * (q - 1), emit);
}

}  // namespace

void enumerate_pairs(const density_params& params,
                     const std::function<void(const pair_term&)>& emit) {
  const std::vector<u64> qs = usable_primes(params.q_max);
  enum_walk(qs, params.cmp, 0, 1, 1, rational(1), 3, 2, emit);
}

density_value conjecture_value(const density_params& params) {
  const std::vector<u64> qs = usable_primes(params.q_max);
  const size_t k = qs.size();
  prune_ctx c{qs, params.cmp, {}, {}, {}, 0, 0};
  c.suf_q.assign(k + 1, 1);
  c.suf_q1.assign(k + 1, 1);
  c.suf_mass.assign(k + 1, rational(1));
  for (size_t i = k; i-- > 0;) {
    c.suf_q[i] = c.suf_q[i + 1] * qs[i];
    c.suf_q1[i] = c.suf_q1[i + 1] * (qs[i] - 1);
    c.suf_mass[i] = c.suf_mass[i + 1] * rational(qs[i] - 2, qs[i] - 4);
  }
  prune_walk(c, 0, 3, 2, 1);
  density_value out;
  out.q_max = params.q_max;
  out.cmp = params.cmp;
  out.prefactor = 1;
  for (u64 q : qs) out.prefactor *= rational(q - 4, q - 2);
  out.sum = c.sum;
  out.value = out.prefactor * c.sum;
  out.value_real = out.value.convert_to<double>();
  out.pair_count = pow3(k);
  out.satisfying_count = c.satisfying;
  return out;
}

rational telescoping_check(u64 q_max) {
  const std::vector<u64> qs = usable_primes(q_max);
  const size_t k = qs.size();
  // integer form over the common denominator D = prod (q-4): each assignment
  // contributes prod over primes dividing neither of (q-4); the total must
  // come back to prod (q-2)
  u128 total = 0;
  const auto rec = [&](const auto& self, size_t idx, u128 prod) -> void {
    if (idx == k) {
      total += prod;
      return;
    }
    self(self, idx + 1, prod * (qs[idx] - 4));
    self(self, idx + 1, prod);
    self(self, idx + 1, prod);
  };
  rec(rec, 0, 1);
  u128 den = 1;
  rational prefactor = 1;
  for (u64 q : qs) {
    den *= q - 4;
    prefactor *= rational(q - 4, q - 2);
  }
  return prefactor * to_rational(total) / to_rational(den);
}

std::vector<density_value> density_trend(const std::vector<u64>& q_list, comparator cmp) {
  std::vector<density_value> out;
  out.reserve(q_list.size());
  for (u64 q : q_list) out.push_back(conjecture_value({q, cmp}));
  return out;
}

}  // namespace twinbias
