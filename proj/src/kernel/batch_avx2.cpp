// Compiled with -mavx2. Only reached after a runtime CPU check.

#include <immintrin.h>

#include "batch_impl.hpp"

namespace pqc::kernel::impl {

namespace {

// Montgomery product of four operand pairs held in the low halves of 64-bit
// lanes. Returns the four results in the low halves of 64-bit lanes.
inline __m256i montymul4(__m256i a, __m256i b, __m256i p, __m256i p0i, __m256i mask31) {
  const __m256i z = _mm256_mul_epu32(a, b);
  // (z * p0i) mod 2^31 only depends on the low 32 bits of z.
  const __m256i t = _mm256_and_si256(_mm256_mul_epu32(z, p0i), mask31);
  const __m256i w = _mm256_mul_epu32(t, p);
  const __m256i s = _mm256_srli_epi64(_mm256_add_epi64(z, w), 31);
  // s < 2p < 2^32, so a signed 64-bit compare is exact.
  const __m256i below = _mm256_cmpgt_epi64(p, s);
  const __m256i d = _mm256_sub_epi64(s, p);
  return _mm256_add_epi64(d, _mm256_and_si256(below, p));
}

}  // namespace

void montymul_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p, Word p0i) {
  const __m256i vp = _mm256_set1_epi64x(p);
  const __m256i vp0i = _mm256_set1_epi64x(p0i);
  const __m256i mask31 = _mm256_set1_epi64x(kLimbMask);
  const __m256i gather_low = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i a_lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
    const __m128i a_hi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i + 4));
    const __m128i b_lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
    const __m128i b_hi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i + 4));
    const __m256i r_lo = montymul4(_mm256_cvtepu32_epi64(a_lo), _mm256_cvtepu32_epi64(b_lo), vp,
                                   vp0i, mask31);
    const __m256i r_hi = montymul4(_mm256_cvtepu32_epi64(a_hi), _mm256_cvtepu32_epi64(b_hi), vp,
                                   vp0i, mask31);
    const __m128i packed_lo = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(r_lo, gather_low));
    const __m128i packed_hi = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(r_hi, gather_low));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), packed_lo);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i + 4), packed_hi);
  }
  montymul_scalar(a + i, b + i, out + i, n - i, p, p0i);
}

void add_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p) {
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i d = _mm256_sub_epi32(_mm256_add_epi32(va, vb), vp);
    const __m256i r = _mm256_add_epi32(d, _mm256_and_si256(vp, _mm256_srai_epi32(d, 31)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), r);
  }
  add_scalar(a + i, b + i, out + i, n - i, p);
}

void sub_avx2(const Word* a, const Word* b, Word* out, std::size_t n, Word p) {
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i d = _mm256_sub_epi32(va, vb);
    const __m256i r = _mm256_add_epi32(d, _mm256_and_si256(vp, _mm256_srai_epi32(d, 31)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), r);
  }
  sub_scalar(a + i, b + i, out + i, n - i, p);
}

}  // namespace pqc::kernel::impl
