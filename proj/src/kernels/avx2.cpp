// Compiled with -mavx2. Only reached after a runtime CPU check.
#include "rnplan/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace rnplan::kernels {
namespace {

void nearest_center_avx2(const double* px, const double* py, std::size_t n, const double* cx,
                         const double* cy, std::size_t k, std::uint32_t* index,
                         double* best_d2) {
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(px + i);
    const __m256d y = _mm256_loadu_pd(py + i);
    __m256d best = inf;
    __m256i best_idx = _mm256_setzero_si256();
    for (std::size_t c = 0; c < k; ++c) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(cx[c]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(cy[c]));
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, d2, lt);
      const __m256i idx = _mm256_set1_epi64x(static_cast<long long>(c));
      best_idx = _mm256_castpd_si256(_mm256_blendv_pd(
          _mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), lt));
    }
    _mm256_storeu_pd(best_d2 + i, best);
    alignas(32) long long lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), best_idx);
    for (int l = 0; l < 4; ++l) index[i + l] = static_cast<std::uint32_t>(lanes[l]);
  }
  if (i < n)
    detail::scalar_table().nearest_center(px + i, py + i, n - i, cx, cy, k, index + i,
                                          best_d2 + i);
}

void within_any_avx2(const double* px, const double* py, std::size_t n, const double* cx,
                     const double* cy, std::size_t k, double r2, std::uint8_t* covered) {
  const __m256d radius2 = _mm256_set1_pd(r2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(px + i);
    const __m256d y = _mm256_loadu_pd(py + i);
    int mask = 0;
    for (std::size_t c = 0; c < k && mask != 0xF; ++c) {
      const __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(cx[c]));
      const __m256d dy = _mm256_sub_pd(y, _mm256_set1_pd(cy[c]));
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      mask |= _mm256_movemask_pd(_mm256_cmp_pd(d2, radius2, _CMP_LE_OQ));
    }
    for (int l = 0; l < 4; ++l) covered[i + l] = static_cast<std::uint8_t>((mask >> l) & 1);
  }
  if (i < n)
    detail::scalar_table().within_any(px + i, py + i, n - i, cx, cy, k, r2, covered + i);
}

void squared_distances_avx2(const double* px, const double* py, std::size_t n, double qx,
                            double qy, double* out) {
  const __m256d qxv = _mm256_set1_pd(qx);
  const __m256d qyv = _mm256_set1_pd(qy);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px + i), qxv);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py + i), qyv);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  if (i < n) detail::scalar_table().squared_distances(px + i, py + i, n - i, qx, qy, out + i);
}

constexpr KernelTable kAvx2{Isa::avx2, nearest_center_avx2, within_any_avx2,
                            squared_distances_avx2};

}  // namespace

const KernelTable* detail::avx2_table() noexcept { return &kAvx2; }

}  // namespace rnplan::kernels
