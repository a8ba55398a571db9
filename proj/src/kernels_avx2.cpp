// AVX2 variants of the hot-loop kernels.  Compiled with -mavx2; only reached
// after a runtime cpu check in the dispatcher.
#include "twinbias/kernels.hpp"

#if defined(TWINBIAS_BUILD_AVX2)
#include <immintrin.h>

namespace twinbias {
namespace {

void prime_mask_avx2(const u64* phi, u64 base, u64 count, u64* words) {
  const u64 nwords = (count + 63) >> 6;
  for (u64 w = 0; w < nwords; ++w) words[w] = 0;
  u64 i = 0;
  const __m256i step = _mm256_set1_epi64x(4);
  __m256i target = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(base - 1)),
                                    _mm256_setr_epi64x(0, 1, 2, 3));
  for (; i + 4 <= count; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(phi + i));
    const __m256i eq = _mm256_cmpeq_epi64(v, target);
    const unsigned mask = unsigned(_mm256_movemask_pd(_mm256_castsi256_pd(eq)));
    words[i >> 6] |= u64(mask) << (i & 63);  // i % 4 == 0, so the nibble stays in-word
    target = _mm256_add_epi64(target, step);
  }
  for (; i < count; ++i)
    if (phi[i] == base + i - 1) words[i >> 6] |= u64(1) << (i & 63);
}

u64 popcount_avx2(const u64* words, u64 nwords) {
  const __m256i lut =
      _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1,
                       2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  u64 i = 0;
  for (; i + 4 <= nwords; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    const __m256i lo = _mm256_and_si256(v, low);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) u64 lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  u64 s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < nwords; ++i) s += u64(__builtin_popcountll(words[i]));
  return s;
}

// widen 4 x u32 to doubles without signed-conversion wraparound above 2^31
inline __m256d widen_u32(__m128i v) {
  __m256d d = _mm256_cvtepi32_pd(v);
  const __m256d wrapped = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_LT_OQ);
  return _mm256_add_pd(d, _mm256_and_pd(wrapped, _mm256_set1_pd(4294967296.0)));
}

// log(1+x) by alternating series through x^7; callers guarantee |x| <= 2^-10,
// making the truncation error below 1e-25 absolute
inline __m256d log1p_small(__m256d x) {
  const __m256d c2 = _mm256_set1_pd(-1.0 / 2.0), c3 = _mm256_set1_pd(1.0 / 3.0),
                c4 = _mm256_set1_pd(-1.0 / 4.0), c5 = _mm256_set1_pd(1.0 / 5.0),
                c6 = _mm256_set1_pd(-1.0 / 6.0), c7 = _mm256_set1_pd(1.0 / 7.0);
  __m256d r = c7;
  r = _mm256_add_pd(_mm256_mul_pd(r, x), c6);
  r = _mm256_add_pd(_mm256_mul_pd(r, x), c5);
  r = _mm256_add_pd(_mm256_mul_pd(r, x), c4);
  r = _mm256_add_pd(_mm256_mul_pd(r, x), c3);
  r = _mm256_add_pd(_mm256_mul_pd(r, x), c2);
  r = _mm256_add_pd(_mm256_mul_pd(r, x), _mm256_set1_pd(1.0));
  return _mm256_mul_pd(r, x);
}

double products_log_avx2(const u32* primes, u64 count) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  u64 i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(primes + i));
    const __m256d q = _mm256_sub_pd(widen_u32(v), one);
    const __m256d x =
        _mm256_div_pd(_mm256_set1_pd(-1.0), _mm256_mul_pd(q, q));
    acc = _mm256_add_pd(acc, log1p_small(x));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
  for (; i < count; ++i) {
    const double q = double(primes[i]) - 1.0;
    const double x = -1.0 / (q * q);
    // same polynomial as the vector path so the remainder matches in kind
    double r = 1.0 / 7.0;
    r = r * x - 1.0 / 6.0;
    r = r * x + 1.0 / 5.0;
    r = r * x - 1.0 / 4.0;
    r = r * x + 1.0 / 3.0;
    r = r * x - 1.0 / 2.0;
    r = r * x + 1.0;
    s += r * x;
  }
  return s;
}

double tail_log_avx2(const u32* primes, u64 count) {
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_setzero_pd();
  u64 i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(primes + i));
    const __m256d p = widen_u32(v);
    const __m256d x = _mm256_div_pd(one, _mm256_sub_pd(p, one));
    const __m256d term = _mm256_div_pd(log1p_small(x), _mm256_sub_pd(p, two));
    acc = _mm256_add_pd(acc, term);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
  for (; i < count; ++i) {
    const double p = double(primes[i]);
    const double x = 1.0 / (p - 1.0);
    double r = 1.0 / 7.0;
    r = r * x - 1.0 / 6.0;
    r = r * x + 1.0 / 5.0;
    r = r * x - 1.0 / 4.0;
    r = r * x + 1.0 / 3.0;
    r = r * x - 1.0 / 2.0;
    r = r * x + 1.0;
    s += (r * x) / (p - 2.0);
  }
  return s;
}

constexpr kernel_ops avx2_table = {
    "avx2", prime_mask_avx2, popcount_avx2, products_log_avx2, tail_log_avx2,
};

}  // namespace

namespace detail {
const kernel_ops* avx2_kernel_table() { return &avx2_table; }
}  // namespace detail

}  // namespace twinbias
#endif  // TWINBIAS_BUILD_AVX2
