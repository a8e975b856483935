// AArch64 only; Advanced SIMD is part of the base ISA there.
#include "rnplan/kernels.hpp"

#include <arm_neon.h>

#include <limits>

namespace rnplan::kernels {
namespace {

void nearest_center_neon(const double* px, const double* py, std::size_t n, const double* cx,
                         const double* cy, std::size_t k, std::uint32_t* index,
                         double* best_d2) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(px + i);
    const float64x2_t y = vld1q_f64(py + i);
    float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
    uint64x2_t best_idx = vdupq_n_u64(0);
    for (std::size_t c = 0; c < k; ++c) {
      const float64x2_t dx = vsubq_f64(x, vdupq_n_f64(cx[c]));
      const float64x2_t dy = vsubq_f64(y, vdupq_n_f64(cy[c]));
      const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
      const uint64x2_t lt = vcltq_f64(d2, best);
      best = vbslq_f64(lt, d2, best);
      best_idx = vbslq_u64(lt, vdupq_n_u64(c), best_idx);
    }
    vst1q_f64(best_d2 + i, best);
    index[i] = static_cast<std::uint32_t>(vgetq_lane_u64(best_idx, 0));
    index[i + 1] = static_cast<std::uint32_t>(vgetq_lane_u64(best_idx, 1));
  }
  if (i < n)
    detail::scalar_table().nearest_center(px + i, py + i, n - i, cx, cy, k, index + i,
                                          best_d2 + i);
}

void within_any_neon(const double* px, const double* py, std::size_t n, const double* cx,
                     const double* cy, std::size_t k, double r2, std::uint8_t* covered) {
  const float64x2_t radius2 = vdupq_n_f64(r2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(px + i);
    const float64x2_t y = vld1q_f64(py + i);
    uint64x2_t hit = vdupq_n_u64(0);
    for (std::size_t c = 0; c < k; ++c) {
      const float64x2_t dx = vsubq_f64(x, vdupq_n_f64(cx[c]));
      const float64x2_t dy = vsubq_f64(y, vdupq_n_f64(cy[c]));
      const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
      hit = vorrq_u64(hit, vcleq_f64(d2, radius2));
      if (vgetq_lane_u64(hit, 0) && vgetq_lane_u64(hit, 1)) break;
    }
    covered[i] = vgetq_lane_u64(hit, 0) ? 1 : 0;
    covered[i + 1] = vgetq_lane_u64(hit, 1) ? 1 : 0;
  }
  if (i < n)
    detail::scalar_table().within_any(px + i, py + i, n - i, cx, cy, k, r2, covered + i);
}

void squared_distances_neon(const double* px, const double* py, std::size_t n, double qx,
                            double qy, double* out) {
  const float64x2_t qxv = vdupq_n_f64(qx);
  const float64x2_t qyv = vdupq_n_f64(qy);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(px + i), qxv);
    const float64x2_t dy = vsubq_f64(vld1q_f64(py + i), qyv);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  if (i < n) detail::scalar_table().squared_distances(px + i, py + i, n - i, qx, qy, out + i);
}

constexpr KernelTable kNeon{Isa::neon, nearest_center_neon, within_any_neon,
                            squared_distances_neon};

}  // namespace

const KernelTable* detail::neon_table() noexcept { return &kNeon; }

}  // namespace rnplan::kernels
