#include <immintrin.h>

#include "crancache/kernels/kernels.hpp"

namespace crancache::kernels::avx2 {

double weighted_sum(const double* w, const double* x, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_add_pd(acc, prod);
  }
  // (l0 + l2, l1 + l3), then their sum
  const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double total = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
  for (; i < n; ++i) total += w[i] * x[i];
  return total;
}

void scaled_add(double* acc, double scale, const double* x, std::size_t n) noexcept {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(s, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
  }
  for (; i < n; ++i) acc[i] += scale * x[i];
}

std::size_t count_below(const double* x, std::size_t n, double threshold) noexcept {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(x + i), t, _CMP_LT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(lt)));
  }
  for (; i < n; ++i) c += x[i] < threshold ? 1 : 0;
  return c;
}

}  // namespace crancache::kernels::avx2
