#include <atomic>
#include <cstdlib>
#include <string>

#include "rnplan/errors.hpp"
#include "rnplan/geometry.hpp"
#include "rnplan/kernels.hpp"

namespace rnplan::kernels {

#ifndef RNPLAN_HAVE_AVX2
const KernelTable* detail::avx2_table() noexcept { return nullptr; }
#endif
#ifndef RNPLAN_HAVE_NEON
const KernelTable* detail::neon_table() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(RNPLAN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("RNPLAN_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
      if (want == isa_name(isa) && available(isa)) return &table(isa);
  }
  if (available(Isa::avx2)) return detail::avx2_table();
  if (available(Isa::neon)) return detail::neon_table();
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
    case Isa::neon: return detail::neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa))
    throw InvalidParameter("kernel ISA not available: " + std::string(isa_name(isa)));
  switch (isa) {
    case Isa::avx2: return *detail::avx2_table();
    case Isa::neon: return *detail::neon_table();
    case Isa::scalar: break;
  }
  return detail::scalar_table();
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force(Isa isa) { current().store(&table(isa), std::memory_order_release); }

Columns::Columns(std::span<const PlanarPoint> points) {
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& p : points) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
}

void nearest_center(const Columns& points, const Columns& centers,
                    std::span<std::uint32_t> index, std::span<double> best_d2) {
  if (centers.size() == 0) throw InvalidParameter("nearest_center: no centers");
  if (index.size() < points.size() || best_d2.size() < points.size())
    throw InvalidParameter("nearest_center: output span too small");
  active().nearest_center(points.x.data(), points.y.data(), points.size(), centers.x.data(),
                          centers.y.data(), centers.size(), index.data(), best_d2.data());
}

void within_any(const Columns& points, const Columns& centers, double r2,
                std::span<std::uint8_t> covered) {
  if (covered.size() < points.size()) throw InvalidParameter("within_any: output span too small");
  active().within_any(points.x.data(), points.y.data(), points.size(), centers.x.data(),
                      centers.y.data(), centers.size(), r2, covered.data());
}

void squared_distances(const Columns& points, double qx, double qy, std::span<double> out) {
  if (out.size() < points.size())
    throw InvalidParameter("squared_distances: output span too small");
  active().squared_distances(points.x.data(), points.y.data(), points.size(), qx, qy, out.data());
}

}  // namespace rnplan::kernels
