// SPDX-License-Identifier: Apache-2.0
// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// cpuid check, or directly from tests that perform the same check.
#include <immintrin.h>

#include "hst/kernels/kernels.hpp"

namespace hst::kernels::avx2 {
namespace {

// Two complex doubles per register: [re0 im0 re1 im1].
inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  // even: ar*br + ai*bi, odd: ar*bi - ai*br
  return _mm256_fmsubadd_pd(b, a_re, _mm256_mul_pd(b_swap, a_im));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(out + i, cmul(load(a + i), load(b + i)));
  if (i < n) scalar::multiply(a + i, b + i, out + i, n - i);
}

void multiply_accumulate(const cplx* a, const cplx* b, cplx* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(acc + i, _mm256_add_pd(load(acc + i), cmul(load(a + i), load(b + i))));
  if (i < n) scalar::multiply_accumulate(a + i, b + i, acc + i, n - i);
}

void multiply_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(out + i, cmul_conj(load(a + i), load(b + i)));
  if (i < n) scalar::multiply_conj(a + i, b + i, out + i, n - i);
}

void divide(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vb = load(b + i);
    const __m256d num = cmul_conj(vb, load(a + i));
    const __m256d sq = _mm256_mul_pd(vb, vb);
    const __m256d den = _mm256_hadd_pd(sq, sq);
    store(out + i, _mm256_div_pd(num, den));
  }
  if (i < n) scalar::divide(a + i, b + i, out + i, n - i);
}

void scale(const cplx* a, double s, cplx* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(out + i, _mm256_mul_pd(load(a + i), vs));
  if (i < n) scalar::scale(a + i, s, out + i, n - i);
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = _mm256_add_pd(acc, cmul_conj(load(a + i), load(b + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx result{lanes[0] + lanes[2], lanes[1] + lanes[3]};
  if (i < n) result += scalar::dot_conj(a + i, b + i, n - i);
  return result;
}

double squared_distance(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(load(a + i), load(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = hsum(acc);
  if (i < n) sum += scalar::squared_distance(a + i, b + i, n - i);
  return sum;
}

double energy(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = hsum(acc);
  if (i < n) sum += scalar::energy(a + i, n - i);
  return sum;
}

}  // namespace hst::kernels::avx2
