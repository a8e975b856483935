#pragma once

// Distance kernels behind the clustering, coverage and covering/packing hot
// loops. Every kernel has a scalar reference implementation and optional
// SIMD variants (AVX2 on x86-64, NEON on AArch64) picked at runtime. All
// variants use the same sequence of IEEE operations per lane (sub, mul, add,
// compare; no fused multiply-add), so they produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rnplan {
struct PlanarPoint;
}

namespace rnplan::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // For each point, index of the nearest centre (lowest index on ties) and the
  // squared distance to it.
  void (*nearest_center)(const double* px, const double* py, std::size_t n, const double* cx,
                         const double* cy, std::size_t k, std::uint32_t* index, double* best_d2);
  // covered[i] = 1 iff some centre lies within squared distance r2 (inclusive).
  void (*within_any)(const double* px, const double* py, std::size_t n, const double* cx,
                     const double* cy, std::size_t k, double r2, std::uint8_t* covered);
  // out[i] = (px[i] - qx)^2 + (py[i] - qy)^2
  void (*squared_distances)(const double* px, const double* py, std::size_t n, double qx,
                            double qy, double* out);
};

bool available(Isa isa) noexcept;
const KernelTable& table(Isa isa);

/// Kernels chosen for this process: the widest available ISA, unless the
/// RNPLAN_SIMD environment variable names another (scalar|avx2|neon).
const KernelTable& active();

/// Overrides the active table; used by equivalence tests and benchmarks.
void force(Isa isa);

/// Structure-of-arrays copy of point coordinates for the kernels.
struct Columns {
  std::vector<double> x;
  std::vector<double> y;

  Columns() = default;
  explicit Columns(std::span<const PlanarPoint> points);
  std::size_t size() const noexcept { return x.size(); }
};

void nearest_center(const Columns& points, const Columns& centers,
                    std::span<std::uint32_t> index, std::span<double> best_d2);
void within_any(const Columns& points, const Columns& centers, double r2,
                std::span<std::uint8_t> covered);
void squared_distances(const Columns& points, double qx, double qy, std::span<double> out);

namespace detail {
const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace rnplan::kernels
