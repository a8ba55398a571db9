#include "twinbias/constants.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "twinbias/kernels.hpp"
#include "twinbias/sieve.hpp"

namespace twinbias {

namespace {

struct kahan_sum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// sum of log(1 - 1/(p-1)^2) over odd primes p <= P, deterministic block order
double products_log_sum(u64 P) {
  if (P < 3) return 0.0;
  const std::vector<u32> primes = primes_up_to(P);
  const kernel_ops& k = active_kernels();
  kahan_sum acc;
  size_t i = 1;  // skip p = 2
  for (; i < primes.size() && primes[i] < kernel_series_min; ++i) {
    const double q = double(primes[i]) - 1.0;
    acc.add(std::log1p(-1.0 / (q * q)));
  }
  const size_t block = size_t(1) << 20;
  while (i < primes.size()) {
    const size_t n = std::min(block, primes.size() - i);
    acc.add(k.products_log_block(primes.data() + i, n));
    i += n;
  }
  return acc.s;
}

// sum of log(1 + 1/(p-1)) / (p-2) over primes r0 <= p <= P
double tail_logs_sum(u64 r0, u64 P) {
  const std::vector<u32> primes = primes_up_to(P);
  const kernel_ops& k = active_kernels();
  kahan_sum acc;
  size_t i = 0;
  while (i < primes.size() && primes[i] < r0) ++i;
  for (; i < primes.size() && primes[i] < kernel_series_min; ++i) {
    const double p = double(primes[i]);
    acc.add(std::log1p(1.0 / (p - 1.0)) / (p - 2.0));
  }
  const size_t block = size_t(1) << 20;
  while (i < primes.size()) {
    const size_t n = std::min(block, primes.size() - i);
    acc.add(k.tail_log_block(primes.data() + i, n));
    i += n;
  }
  return acc.s;
}

template <typename F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  if (depth <= 0 || std::fabs(both - whole) <= 15.0 * eps)
    return both + (both - whole) / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double eps) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, eps, 52);
}

// estimate of sum over primes p > P of log(1 + 1/(p-1)) / (p-2), as the
// logarithmic integral of the term weight; u = P/t flattens [P, inf) onto (0, 1]
double tail_logs_estimate(u64 P) {
  const double Pd = double(P);
  const auto g = [Pd](double u) {
    if (u <= 0.0) return 0.0;
    const double t = Pd / u;
    return (Pd / (u * u)) * std::log1p(1.0 / (t - 1.0)) / ((t - 2.0) * std::log(t));
  };
  const double rough = 1.0 / ((Pd - 1.0) * std::log(Pd));
  return adaptive_simpson(g, 0.0, 1.0, rough * 1e-6);
}

double c2_for_expected_counts() {
  static const double v = [] {
    euler_value c = twin_prime_constant(1e-8);
    return c.value;
  }();
  return v;
}

void validate_family(const linear_poly_family& family) {
  if (family.polys.empty()) raise(errkind::argument, "family must have at least one polynomial");
  for (const auto& poly : family.polys)
    if (poly.a <= 0) raise(errkind::argument, "family leading coefficients must be positive");
  for (size_t i = 0; i < family.polys.size(); ++i)
    for (size_t j = i + 1; j < family.polys.size(); ++j)
      if (family.polys[i].a == family.polys[j].a && family.polys[i].b == family.polys[j].b)
        raise(errkind::argument, "family polynomials must be pairwise distinct");
}

// baseline solution count with no deviation: one shared root mod 2 when two
// polynomials are present, otherwise one root per polynomial capped at p
u64 baseline_roots(size_t m, u64 p) { return std::min<u64>(m, p == 2 ? 1 : m); }

std::set<u64> deviant_candidates(const linear_poly_family& family) {
  std::set<u64> cand = {2, 3};
  for (const auto& poly : family.polys) {
    for (auto [q, e] : factorize(u64(poly.a))) cand.insert(q);
  }
  const auto& polys = family.polys;
  for (size_t i = 0; i < polys.size(); ++i)
    for (size_t j = i + 1; j < polys.size(); ++j) {
      const __int128 res =
          __int128(polys[i].a) * polys[j].b - __int128(polys[j].a) * polys[i].b;
      if (res == 0)
        raise(errkind::validity, "family polynomials are proportional (shared roots everywhere)");
      const __int128 mag = res < 0 ? -res : res;
      if (mag >= __int128(1) << 63)
        raise(errkind::argument, "family coefficients too large to factor the resultant");
      for (auto [q, e] : factorize(u64(mag))) cand.insert(q);
    }
  return cand;
}

}  // namespace

euler_value twin_prime_constant_truncated(u64 p_max) {
  if (p_max < 2) raise(errkind::range, "twin_prime_constant: cutoff must be >= 2");
  if (p_max > truncation_cap) raise(errkind::range, "twin_prime_constant: cutoff above cap");
  euler_value out;
  out.method = euler_method::direct_product;
  out.truncation_prime = p_max;
  out.value = std::exp(products_log_sum(p_max));
  out.tail_bound = out.value * std::expm1(1.0 / double(p_max - 1)) + 1e-14;
  out.tail_estimate = 0.0;
  return out;
}

euler_value twin_prime_constant(double target_abs_err) {
  if (!(target_abs_err >= 1e-10))
    raise(errkind::range, "twin_prime_constant: target must be >= 1e-10");
  const double p_needed = std::ceil(1.0 / target_abs_err);
  if (p_needed > double(truncation_cap))
    raise(errkind::precision, "twin_prime_constant: target unreachable below truncation cap");
  euler_value out = twin_prime_constant_truncated(u64(p_needed));
  if (out.tail_bound > target_abs_err)
    raise(errkind::precision, "twin_prime_constant: tail bound exceeds target");
  return out;
}

double hl_integral(double x, unsigned m) {
  if (m < 1) raise(errkind::argument, "hl_integral: m must be >= 1");
  if (!(x >= 2.0)) raise(errkind::range, "hl_integral: x must be >= 2");
  if (x == 2.0) return 0.0;
  const double dm = double(m);
  const auto f = [dm](double t) { return std::pow(std::log(t), -dm); };
  return adaptive_simpson(f, 2.0, x, 1e-12 * (x - 2.0));
}

u64 nf_count(const linear_poly_family& family, u64 p) {
  validate_family(family);
  std::set<u64> roots;
  for (const auto& poly : family.polys) {
    const u64 a = u64(((poly.a % i64(p)) + i64(p)) % i64(p));
    const u64 b = u64(((poly.b % i64(p)) + i64(p)) % i64(p));
    if (a == 0) {
      if (b == 0) return p;  // vanishes identically: invalid family at p
      continue;
    }
    roots.insert(mulmod((p - b) % p, inverse_mod(a, p), p));
  }
  return roots.size();
}

rational bh_deviant_factor(const linear_poly_family& family) {
  validate_family(family);
  const size_t m = family.polys.size();
  if (m > 2)
    raise(errkind::argument, "expected counts support one or two linear polynomials");
  rational k = 1;
  for (u64 p : deviant_candidates(family)) {
    const u64 nf = nf_count(family, p);
    if (nf == p) raise(errkind::validity, "family vanishes identically modulo a prime");
    const u64 n0 = baseline_roots(m, p);
    k *= rational(p - nf, p - n0);
  }
  return k;
}

double bh_expected_count(const linear_poly_family& family, double x) {
  const rational k = bh_deviant_factor(family);
  const size_t m = family.polys.size();
  double t_max = std::numeric_limits<double>::infinity();
  for (const auto& poly : family.polys)
    t_max = std::min(t_max, (x - double(poly.b)) / double(poly.a));
  if (!(t_max >= 2.0))
    raise(errkind::range, "bh_expected_count: bound leaves no argument range");
  const double base = m == 2 ? 2.0 * c2_for_expected_counts() : 1.0;
  return k.convert_to<double>() * base * hl_integral(t_max, unsigned(m));
}

rational bh_ratio_to_twin(const linear_poly_family& family) {
  validate_family(family);
  if (family.polys.size() != 2 || family.polys[0].a != family.polys[1].a)
    raise(errkind::argument,
          "ratio to the twin count needs two polynomials with equal leading coefficients");
  return bh_deviant_factor(family) / family.polys[0].a;
}

linear_poly_family family_for_residue(u64 r) {
  if (r < 13 || !is_prime(r))
    raise(errkind::argument, "family_for_residue: r must be a prime >= 13");
  const u64 inv385 = inverse_mod(385 % r, r);
  const u64 k0 = (r - (2 * inv385) % r) % r;
  if (k0 == 0) raise(errkind::arithmetic, "family_for_residue: residue degenerated to zero");
  const u64 b = checked_add(checked_mul(385, k0), 1);
  if (b % r != r - 1)
    raise(errkind::arithmetic, "family_for_residue: self-check b = -1 mod r failed");
  const u64 lead = checked_mul(385, r);
  if (lead > u64(std::numeric_limits<i64>::max()) || b + 2 > u64(std::numeric_limits<i64>::max()))
    raise(errkind::arithmetic, "family_for_residue: coefficients overflow");
  return {{{i64(lead), i64(b)}, {i64(lead), i64(b + 2)}}};
}

euler_value tail_series_truncated(u64 r0, u64 p_max) {
  if (r0 < 3) raise(errkind::range, "tail_series: r0 must be >= 3");
  if (p_max < 2) raise(errkind::range, "tail_series: cutoff must be >= 2");
  if (p_max > truncation_cap) raise(errkind::range, "tail_series: cutoff above cap");
  euler_value out;
  out.method = euler_method::direct_sum_with_tail_estimate;
  out.truncation_prime = p_max;
  if (r0 > p_max) {
    out.value = 0.0;
    out.tail_estimate = 0.0;
    out.tail_bound = 1.0 / double(r0 - 2);  // telescoping over-count from r0 on
    return out;
  }
  const double direct = tail_logs_sum(r0, p_max);
  out.tail_estimate = tail_logs_estimate(p_max);
  out.value = direct + out.tail_estimate;
  out.tail_bound = 1.0 / double(p_max - 1) + 1e-15;
  return out;
}

euler_value tail_series(u64 r0, double target_abs_err) {
  if (r0 < 3) raise(errkind::range, "tail_series: r0 must be >= 3");
  if (!(target_abs_err > 0))
    raise(errkind::range, "tail_series: target must be positive");
  double p_needed = std::ceil(1.01 / target_abs_err) + 1.0;
  if (p_needed < 1000.0) p_needed = 1000.0;
  if (p_needed > double(truncation_cap))
    raise(errkind::precision, "tail_series: target unreachable below truncation cap");
  euler_value out = tail_series_truncated(r0, u64(p_needed));
  if (r0 <= out.truncation_prime && out.tail_bound > target_abs_err)
    raise(errkind::precision, "tail_series: tail bound exceeds target");
  return out;
}

density_bounds density_lower_bounds(double target_abs_err) {
  const double t13 = tail_series(13, target_abs_err).value;
  const double t5 = tail_series(5, target_abs_err).value;
  return {
      1.0 / 135.0 - t13 / (135.0 * std::log(77.0 / 72.0)),
      1.0 - t5 / std::log(1.5),
  };
}

}  // namespace twinbias
