#include "rnplan/kernels.hpp"

#include <limits>

namespace rnplan::kernels {
namespace {

void nearest_center_scalar(const double* px, const double* py, std::size_t n, const double* cx,
                           const double* cy, std::size_t k, std::uint32_t* index,
                           double* best_d2) {
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_idx = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double dx = px[i] - cx[c];
      const double dy = py[i] - cy[c];
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        best_idx = static_cast<std::uint32_t>(c);
      }
    }
    index[i] = best_idx;
    best_d2[i] = best;
  }
}

void within_any_scalar(const double* px, const double* py, std::size_t n, const double* cx,
                       const double* cy, std::size_t k, double r2, std::uint8_t* covered) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t hit = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double dx = px[i] - cx[c];
      const double dy = py[i] - cy[c];
      if (dx * dx + dy * dy <= r2) {
        hit = 1;
        break;
      }
    }
    covered[i] = hit;
  }
}

void squared_distances_scalar(const double* px, const double* py, std::size_t n, double qx,
                              double qy, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = px[i] - qx;
    const double dy = py[i] - qy;
    out[i] = dx * dx + dy * dy;
  }
}

constexpr KernelTable kScalar{Isa::scalar, nearest_center_scalar, within_any_scalar,
                              squared_distances_scalar};

}  // namespace

const KernelTable& detail::scalar_table() noexcept { return kScalar; }

}  // namespace rnplan::kernels
