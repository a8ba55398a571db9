#pragma once
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twinbias/arith.hpp"

namespace twinbias {

using rational = boost::multiprecision::cpp_rational;

enum class euler_method { direct_product, direct_sum_with_tail_estimate };

// A truncated prime sum/product evaluation.  The rigorous contract is
// |value - true| <= tail_bound at every truncation point.
struct euler_value {
  double value = 0.0;
  double tail_bound = 0.0;     // rigorous absolute bound on the omitted tail
  double tail_estimate = 0.0;  // non-rigorous estimate already folded into value
  u64 truncation_prime = 0;
  euler_method method = euler_method::direct_product;
};

// largest usable truncation point for the prime summations
inline constexpr u64 truncation_cap = (u64(1) << 32) - 1;

// prod over odd primes p of (1 - 1/(p-1)^2), summed in log space over sieved
// primes up to an automatically chosen cutoff; tail bounded by over-counting
// primes by all integers: sum_{n>P} 1/(n-1)^2 = 1/(P-1)
euler_value twin_prime_constant(double target_abs_err);  // target >= 1e-10
euler_value twin_prime_constant_truncated(u64 p_max);    // explicit cutoff, p_max >= 2

// integral of dt / (log t)^m over [2, x], adaptive Simpson, relative error
// below 1e-9 for the library's ranges
double hl_integral(double x, unsigned m);

struct linear_poly {
  i64 a, b;  // a*t + b with a > 0
};
struct linear_poly_family {
  std::vector<linear_poly> polys;
};

// number of t in [0, p) with prod_i (a_i t + b_i) == 0 mod p; returns p itself
// when a factor vanishes identically mod p (invalid family marker)
u64 nf_count(const linear_poly_family& family, u64 p);

// finite correction K = prod over deviant primes of (p - N_f(p)) / (p - N0(p)),
// where N0 is the deviation-free solution count (m with the p=2 reduction);
// the full singular-series constant is K times the all-primes baseline
rational bh_deviant_factor(const linear_poly_family& family);

// expected number of prime-generating arguments with every value at most x
double bh_expected_count(const linear_poly_family& family, double x);

// limiting ratio of the family's count to the twin-pair count at the same
// bound, exact; requires two polynomials with equal leading coefficients
rational bh_ratio_to_twin(const linear_poly_family& family);

// the pair (385r t + b, 385r t + b + 2) whose first value is 1 mod 385 and
// -1 mod r, with b minimal; r must be a prime >= 13
linear_poly_family family_for_residue(u64 r);

// sum over primes r >= r0 of log(1 + 1/(r-1)) / (r-2): direct summation to a
// cutoff, rigorous over-count tail bound 1/(P-1), plus a logarithmic-integral
// tail estimate folded into the reported value
euler_value tail_series(u64 r0, double target_abs_err);  // r0 >= 3
euler_value tail_series_truncated(u64 r0, u64 p_max);

struct density_bounds {
  double lower_exceptional;    // 1/135 - tail(13) / (135 log(77/72))
  double lower_unexceptional;  // 1 - tail(5) / log(3/2)
};
density_bounds density_lower_bounds(double target_abs_err = 1e-9);

}  // namespace twinbias
